//! Query syntax tree and its canonical pretty-printer. Printing a query
//! and parsing the text back yields an identical tree.

use std::fmt::{self, Display, Formatter, Write as _};

use tgq_core::correlation::SeriesAggregate;
use tgq_core::graph::Direction;
use tgq_core::pattern::{PatternSpec, TrendClass};
use tgq_core::predicate::{Predicate, ValueConstraint};
use tgq_core::relation::{RelationFamily, RelationSpec, StructuralOp, ValueOp};
use tgq_core::structural::{ConnectionMode, ConnectionSpec};
use tgq_core::{AttributeValue, ElementRef, TimeLabel};

use crate::lexer::id_char;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BehaviorKw {
    Value,
    Dist,
    Trend,
    AspectTrends,
    AspectDists,
    Presence,
    Config,
    Pairs,
    ConfigTrend,
    Ref,
}

impl BehaviorKw {
    pub const ALL: [BehaviorKw; 10] = [
        BehaviorKw::Value,
        BehaviorKw::Dist,
        BehaviorKw::Trend,
        BehaviorKw::AspectTrends,
        BehaviorKw::AspectDists,
        BehaviorKw::Presence,
        BehaviorKw::Config,
        BehaviorKw::Pairs,
        BehaviorKw::ConfigTrend,
        BehaviorKw::Ref,
    ];

    pub fn keyword(self) -> &'static str {
        match self {
            BehaviorKw::Value => "VALUE",
            BehaviorKw::Dist => "DIST",
            BehaviorKw::Trend => "TREND",
            BehaviorKw::AspectTrends => "ASPECT TRENDS",
            BehaviorKw::AspectDists => "ASPECT DISTS",
            BehaviorKw::Presence => "PRESENCE",
            BehaviorKw::Config => "CONFIG",
            BehaviorKw::Pairs => "PAIRS",
            BehaviorKw::ConfigTrend => "CONFIG_TREND",
            BehaviorKw::Ref => "REF",
        }
    }

    pub fn is_structural(self) -> bool {
        matches!(
            self,
            BehaviorKw::Presence | BehaviorKw::Config | BehaviorKw::Pairs | BehaviorKw::ConfigTrend
        )
    }
}

/// Named families a free graph reference ranges over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyExpr {
    Nodes,
    Edges,
    Elements,
    Members(String),
    Subsets,
    Components,
    KHop { k: usize, center: Option<String> },
    Pairs(Option<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphExpr {
    /// `node:a`, `edge:e`, or `subset:S` (a subset, or the subset as one
    /// aggregate element for element behaviours).
    Ref(ElementRef),
    AllNodes,
    AllEdges,
    /// `{node:a, node:b}`
    Literal(Vec<String>),
    /// `PAIR(node:a, node:b)`
    Pair(String, String),
    Free { var: String, family: Option<FamilyExpr> },
}

impl GraphExpr {
    pub fn is_free(&self) -> bool {
        matches!(self, GraphExpr::Free { .. })
    }
}

pub type Range = (TimeLabel, TimeLabel);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TimeExpr {
    At(TimeLabel),
    During(TimeLabel, TimeLabel),
    DuringAll,
    AtFree { var: String, within: Option<Range> },
    DuringFree {
        var: String,
        min_len: Option<usize>,
        within: Option<Range>,
    },
}

impl TimeExpr {
    pub fn is_free(&self) -> bool {
        matches!(self, TimeExpr::AtFree { .. } | TimeExpr::DuringFree { .. })
    }

    pub fn is_point(&self) -> bool {
        matches!(self, TimeExpr::At(_) | TimeExpr::AtFree { .. })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Scope {
    pub behavior: BehaviorKw,
    pub attr: Option<String>,
    pub graph: GraphExpr,
    pub time: TimeExpr,
}

impl Scope {
    pub fn is_free(&self) -> bool {
        self.graph.is_free() || self.time.is_free()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Having {
    Value(ValueConstraint),
    Pattern(PatternSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Side {
    pub scope: Scope,
    pub having: Option<Having>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Target {
    Time,
    Graph,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindTime {
    At(TimeLabel),
    During(TimeLabel, TimeLabel),
    DuringAll,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FindScope {
    Element(ElementRef),
    Family(FamilyExpr),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Find {
    pub targets: Vec<Target>,
    pub predicate: Predicate,
    pub scope: Option<FindScope>,
    pub time: Option<FindTime>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Search {
    pub pattern: PatternSpec,
    pub attr: Option<String>,
    pub graph: GraphExpr,
    pub time: TimeExpr,
}

#[derive(Clone, Debug, PartialEq)]
pub enum CompareRhs {
    Side(Side),
    Value(AttributeValue),
    Pattern(PatternSpec),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Using {
    Relation(RelationSpec),
    Families(Vec<RelationFamily>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Compare {
    pub left: Side,
    pub right: CompareRhs,
    pub using: Option<Using>,
    pub all_pairs: bool,
}

impl Compare {
    /// Inverse when a side has a free reference or a constraint to satisfy.
    pub fn is_inverse(&self) -> bool {
        let side_inverse = |s: &Side| s.scope.is_free() || s.having.is_some();
        side_inverse(&self.left) || matches!(&self.right, CompareRhs::Side(s) if side_inverse(s))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Aux {
    pub relation: RelationSpec,
    pub negated: bool,
    pub at: Option<TimeLabel>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Seek {
    pub left: Side,
    pub right: Side,
    pub relation: RelationSpec,
    pub aux: Vec<Aux>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PointSel {
    At(TimeLabel),
    Free { var: String, within: Option<Range> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Series {
    Graph {
        aggregate: Option<SeriesAggregate>,
        attr: String,
        graph: GraphExpr,
        time: TimeExpr,
    },
    External(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Correlate {
    pub left: Series,
    pub right: Series,
    pub lag: i64,
    pub per_element: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Query {
    Lookup {
        attr: String,
        element: ElementRef,
        time: TimeLabel,
    },
    InverseLookup(Find),
    Characterize(Scope),
    PatternSearch(Search),
    Compare(Compare),
    InverseCompare(Compare),
    RelationSeek(Seek),
    Connection {
        a: String,
        b: String,
        spec: ConnectionSpec,
        time: TimeLabel,
    },
    ConnectedSearch {
        from: Option<String>,
        spec: ConnectionSpec,
        time: PointSel,
    },
    ConnectionTimes {
        a: String,
        b: String,
        spec: ConnectionSpec,
        within: Option<Range>,
    },
    StructCharacterize(Scope),
    StructSearch(Search),
    Correlate(Correlate),
}

impl Query {
    /// Constructor name, one per task family.
    pub fn kind(&self) -> &'static str {
        match self {
            Query::Lookup { .. } => "Lookup",
            Query::InverseLookup(_) => "InverseLookup",
            Query::Characterize(_) => "Characterize",
            Query::PatternSearch(_) => "PatternSearch",
            Query::Compare(_) => "Compare",
            Query::InverseCompare(_) => "InverseCompare",
            Query::RelationSeek(_) => "RelationSeek",
            Query::Connection { .. } => "Connection",
            Query::ConnectedSearch { .. } => "ConnectedSearch",
            Query::ConnectionTimes { .. } => "ConnectionTimes",
            Query::StructCharacterize(_) => "StructCharacterize",
            Query::StructSearch(_) => "StructSearch",
            Query::Correlate(_) => "Correlate",
        }
    }
}

/// Words the parser treats as keywords somewhere; attribute and series
/// names spelled like one are printed quoted.
pub const KEYWORDS: &[&str] = &[
    "LOOKUP", "OF", "AT", "FIND", "WHERE", "IN", "DURING", "ALL", "CHARACTERIZE", "SEARCH", "ON",
    "OVER", "COMPARE", "WITH", "USING", "FAMILY", "PAIRS", "SEEK", "AND", "OR", "NOT", "CONNECTED",
    "NEIGHBORS", "TIMES", "STRUCT", "CORRELATE", "LAG", "PER", "ELEMENT", "EXTERNAL", "HAVING",
    "VALUE", "DIST", "TREND", "ASPECT", "TRENDS", "DISTS", "PRESENCE", "CONFIG", "CONFIG_TREND",
    "REF", "NODES", "EDGES", "ELEMENTS", "MEMBERS", "SUBSETS", "COMPONENTS", "KHOP", "FROM", "PAIR",
    "MINLEN", "WITHIN", "BETWEEN", "TRUE", "FALSE", "ADJACENT", "PATH", "DIR", "VIA", "PATTERN",
    "POINT", "INTERVAL", "SET", "MEAN", "SUM", "MIN", "MAX", "T", "G",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.iter().any(|k| k.eq_ignore_ascii_case(word))
}

fn bare_word_ok(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_' || c == '@')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '@')
        && !is_keyword(s)
}

fn quoted(s: &str) -> String {
    let mut out = String::from("\"");
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// An attribute, series or variable name: bare when unambiguous.
pub fn name(s: &str) -> String {
    if bare_word_ok(s) {
        s.to_string()
    } else {
        quoted(s)
    }
}

fn id(s: &str) -> String {
    if !s.is_empty() && s.chars().all(id_char) {
        s.to_string()
    } else {
        let mut out = String::from("\"");
        for c in s.chars() {
            if c == '"' || c == '\\' {
                out.push('\\');
            }
            out.push(c);
        }
        out.push('"');
        out
    }
}

pub fn elem(e: &ElementRef) -> String {
    match e {
        ElementRef::Node(s) => format!("node:{}", id(s)),
        ElementRef::Edge(s) => format!("edge:{}", id(s)),
        ElementRef::Object(s) => format!("subset:{}", id(s)),
    }
}

fn node(s: &str) -> String {
    format!("node:{}", id(s))
}

fn subset(s: &str) -> String {
    format!("subset:{}", id(s))
}

pub fn number(v: f64) -> String {
    format!("{v}")
}

fn label(l: &TimeLabel) -> String {
    match l {
        TimeLabel::Int(i) => i.to_string(),
        TimeLabel::Text(s) => quoted(s),
    }
}

fn range(r: &Range) -> String {
    format!("[{}, {}]", label(&r.0), label(&r.1))
}

fn value(v: &AttributeValue) -> String {
    match v {
        AttributeValue::Numeric(x) => number(*x),
        AttributeValue::Categorical(s) => quoted(s),
        AttributeValue::Boolean(b) => if *b { "TRUE" } else { "FALSE" }.to_string(),
    }
}

fn relop(op: &ValueOp) -> &'static str {
    match op {
        ValueOp::Eq => "=",
        ValueOp::Ne => "!=",
        ValueOp::Lt => "<",
        ValueOp::Le => "<=",
        ValueOp::Gt => ">",
        ValueOp::Ge => ">=",
        ValueOp::Within(_) => "WITHIN",
    }
}

pub fn constraint(c: &ValueConstraint) -> String {
    match c {
        ValueConstraint::Compare {
            op: ValueOp::Within(tol),
            value: v,
        } => format!("WITHIN {} OF {}", number(*tol), value(v)),
        ValueConstraint::Compare { op, value: v } => format!("{} {}", relop(op), value(v)),
        ValueConstraint::Between { low, high } => format!("BETWEEN {} AND {}", number(*low), number(*high)),
        ValueConstraint::OneOf { values } => {
            format!("IN ({})", values.iter().map(value).collect::<Vec<_>>().join(", "))
        }
    }
}

fn precedence(p: &Predicate) -> u8 {
    match p {
        Predicate::Or { .. } => 1,
        Predicate::And { .. } => 2,
        Predicate::Not { .. } => 3,
        Predicate::Atom { .. } => 4,
    }
}

pub fn predicate(p: &Predicate) -> String {
    let wrap = |child: &Predicate, min: u8| {
        if precedence(child) < min {
            format!("({})", predicate(child))
        } else {
            predicate(child)
        }
    };
    match p {
        Predicate::Atom { attr, constraint: c } => format!("{} {}", name(attr), constraint(c)),
        Predicate::Not { inner } => format!("NOT {}", wrap(inner, 3)),
        Predicate::And { left, right } => format!("{} AND {}", wrap(left, 2), wrap(right, 3)),
        Predicate::Or { left, right } => format!("{} OR {}", wrap(left, 1), wrap(right, 2)),
    }
}

fn family(f: &FamilyExpr) -> String {
    match f {
        FamilyExpr::Nodes => "NODES".into(),
        FamilyExpr::Edges => "EDGES".into(),
        FamilyExpr::Elements => "ELEMENTS".into(),
        FamilyExpr::Members(s) => format!("MEMBERS {}", subset(s)),
        FamilyExpr::Subsets => "SUBSETS".into(),
        FamilyExpr::Components => "COMPONENTS".into(),
        FamilyExpr::KHop { k, center: None } => format!("KHOP {k}"),
        FamilyExpr::KHop { k, center: Some(c) } => format!("KHOP {k} FROM {}", node(c)),
        FamilyExpr::Pairs(None) => "PAIRS".into(),
        FamilyExpr::Pairs(Some(s)) => format!("PAIRS OF {}", subset(s)),
    }
}

fn graph(g: &GraphExpr) -> String {
    match g {
        GraphExpr::Ref(e) => elem(e),
        GraphExpr::AllNodes => "NODES".into(),
        GraphExpr::AllEdges => "EDGES".into(),
        GraphExpr::Literal(ids) => format!("{{{}}}", ids.iter().map(|i| node(i)).collect::<Vec<_>>().join(", ")),
        GraphExpr::Pair(a, b) => format!("PAIR({}, {})", node(a), node(b)),
        GraphExpr::Free { var, family: None } => format!("?{var}"),
        GraphExpr::Free { var, family: Some(f) } => format!("?{var} IN {}", family(f)),
    }
}

fn time(t: &TimeExpr) -> String {
    match t {
        TimeExpr::At(l) => format!("AT t={}", label(l)),
        TimeExpr::During(a, b) => format!("DURING [{}, {}]", label(a), label(b)),
        TimeExpr::DuringAll => "DURING ALL".into(),
        TimeExpr::AtFree { var, within } => {
            let mut s = format!("AT ?{var}");
            if let Some(r) = within {
                write!(s, " IN {}", range(r)).unwrap();
            }
            s
        }
        TimeExpr::DuringFree { var, min_len, within } => {
            let mut s = format!("DURING ?{var}");
            if let Some(k) = min_len {
                write!(s, " MINLEN {k}").unwrap();
            }
            if let Some(r) = within {
                write!(s, " IN {}", range(r)).unwrap();
            }
            s
        }
    }
}

fn scope(s: &Scope) -> String {
    let mut out = s.behavior.keyword().to_string();
    if let Some(a) = &s.attr {
        out.push(' ');
        out.push_str(&name(a));
    }
    write!(out, " OF {} {}", graph(&s.graph), time(&s.time)).unwrap();
    out
}

fn side(s: &Side) -> String {
    let mut out = scope(&s.scope);
    match &s.having {
        Some(Having::Value(c)) => write!(out, " HAVING {}", constraint(c)).unwrap(),
        Some(Having::Pattern(p)) => write!(out, " HAVING {}", pattern(p)).unwrap(),
        None => {}
    }
    out
}

fn class_map<K: Copy, V>(items: impl Iterator<Item = (K, V)>, key: impl Fn(K) -> String, val: impl Fn(V) -> String) -> String {
    items.map(|(k, v)| format!("{}: {}", key(k), val(v))).collect::<Vec<_>>().join(", ")
}

pub fn pattern(p: &PatternSpec) -> String {
    match p {
        PatternSpec::Trend { class } => format!("TREND {}", class.name()),
        PatternSpec::Distribution { class } => format!("DIST {}", class.name()),
        PatternSpec::DistributionShape { shape } => format!(
            "DIST(mean={}, stddev={}, min={}, max={}, hist=[{}])",
            number(shape.mean),
            number(shape.stddev),
            number(shape.min),
            number(shape.max),
            shape.histogram.iter().map(|h| number(*h)).collect::<Vec<_>>().join(", ")
        ),
        PatternSpec::TrendsOverGraph { frequencies } => format!(
            "ASPECT TRENDS {{{}}}",
            class_map(frequencies.iter(), |k: &TrendClass| k.name().to_string(), |v: &usize| v.to_string())
        ),
        PatternSpec::DistributionOverTime { mean, stddev } => {
            let mut parts = Vec::new();
            if let Some(m) = mean {
                parts.push(format!("mean={}", m.name()));
            }
            if let Some(s) = stddev {
                parts.push(format!("stddev={}", s.name()));
            }
            format!("ASPECT DISTS ({})", parts.join(", "))
        }
        PatternSpec::Presence { class } => format!("PRESENCE {}", class.name()),
        PatternSpec::Configuration { metrics, motif } => {
            let mut parts: Vec<String> = metrics.iter().map(|(m, v)| format!("{}={}", m.name(), number(*v))).collect();
            if let Some(m) = motif {
                parts.push(format!("motif={}", m.name()));
            }
            format!("CONFIG({})", parts.join(", "))
        }
        PatternSpec::PairsAggregate { frequencies } => format!(
            "PAIRS {{{}}}",
            class_map(frequencies.iter(), |k: &tgq_core::pattern::PresenceClass| k.name().to_string(), |v: &usize| v.to_string())
        ),
        PatternSpec::ConfigurationTrend { trends } => format!(
            "CONFIG_TREND({})",
            trends.iter().map(|(m, c)| format!("{}={}", m.name(), c.name())).collect::<Vec<_>>().join(", ")
        ),
        PatternSpec::Exact { pattern } => format!("EXACT {}", pattern.kind_name()),
    }
}

pub fn family_keyword(f: RelationFamily) -> &'static str {
    match f {
        RelationFamily::Value => "VALUE",
        RelationFamily::Pattern => "PATTERN",
        RelationFamily::TemporalPoint => "POINT",
        RelationFamily::TemporalInterval => "INTERVAL",
        RelationFamily::Set => "SET",
        RelationFamily::Structural => "STRUCT",
    }
}

pub fn relation(r: &RelationSpec) -> String {
    let fam = family_keyword(r.family());
    match r {
        RelationSpec::Value(ValueOp::Within(tol)) => format!("{fam} WITHIN {}", number(*tol)),
        RelationSpec::Value(op) => format!("{fam} {}", relop(op)),
        RelationSpec::Structural(StructuralOp::DistanceLe(k)) => format!("{fam} DISTANCE <= {k}"),
        other => format!("{fam} {}", other.tag().to_ascii_uppercase()),
    }
}

fn conn(spec: &ConnectionSpec) -> String {
    let mut out = match spec.mode {
        ConnectionMode::Adjacent => "ADJACENT".to_string(),
        ConnectionMode::Path => "PATH".to_string(),
    };
    if let Some(k) = spec.max_distance {
        write!(out, " <= {k}").unwrap();
    }
    match spec.direction {
        Direction::Any => {}
        Direction::Out => out.push_str(" DIR OUT"),
        Direction::In => out.push_str(" DIR IN"),
    }
    if let Some(p) = &spec.edge_predicate {
        write!(out, " VIA {}", predicate(p)).unwrap();
    }
    out
}

fn point_sel(p: &PointSel) -> String {
    match p {
        PointSel::At(l) => format!("AT t={}", label(l)),
        PointSel::Free { var, within: None } => format!("AT ?{var}"),
        PointSel::Free { var, within: Some(r) } => format!("AT ?{var} IN {}", range(r)),
    }
}

fn series(s: &Series) -> String {
    match s {
        Series::External(n) => format!("EXTERNAL {}", name(n)),
        Series::Graph {
            aggregate,
            attr,
            graph: g,
            time: t,
        } => {
            let agg = aggregate.map(|a| format!("{} ", a.name())).unwrap_or_default();
            format!("{agg}{} OF {} {}", name(attr), graph(g), time(t))
        }
    }
}

fn compare(c: &Compare) -> String {
    let rhs = match &c.right {
        CompareRhs::Side(s) => side(s),
        CompareRhs::Value(v) => value(v),
        CompareRhs::Pattern(p) => pattern(p),
    };
    let mut out = format!("COMPARE {} WITH {rhs}", side(&c.left));
    match &c.using {
        Some(Using::Relation(r)) => write!(out, " USING {}", relation(r)).unwrap(),
        Some(Using::Families(f)) => write!(
            out,
            " USING FAMILY {}",
            f.iter().map(|f| family_keyword(*f)).collect::<Vec<_>>().join(", ")
        )
        .unwrap(),
        None => {}
    }
    if c.all_pairs {
        out.push_str(" ALL PAIRS");
    }
    out
}

impl Display for Query {
    fn fmt(&self, f: &mut Formatter<'_>) -> fmt::Result {
        match self {
            Query::Lookup { attr, element, time } => {
                write!(f, "LOOKUP {} OF {} AT t={}", name(attr), elem(element), label(time))
            }
            Query::InverseLookup(find) => {
                let targets: Vec<&str> = find
                    .targets
                    .iter()
                    .map(|t| match t {
                        Target::Time => "t",
                        Target::Graph => "g",
                    })
                    .collect();
                write!(f, "FIND {} WHERE {}", targets.join(", "), predicate(&find.predicate))?;
                match &find.scope {
                    Some(FindScope::Element(e)) => write!(f, " OF {}", elem(e))?,
                    Some(FindScope::Family(fam)) => write!(f, " IN {}", family(fam))?,
                    None => {}
                }
                match &find.time {
                    Some(FindTime::At(l)) => write!(f, " AT t={}", label(l)),
                    Some(FindTime::During(a, b)) => write!(f, " DURING [{}, {}]", label(a), label(b)),
                    Some(FindTime::DuringAll) => write!(f, " DURING ALL"),
                    None => Ok(()),
                }
            }
            Query::Characterize(s) => write!(f, "CHARACTERIZE {}", scope(s)),
            Query::StructCharacterize(s) => write!(f, "STRUCT CHARACTERIZE {}", scope(s)),
            Query::PatternSearch(s) | Query::StructSearch(s) => {
                if matches!(self, Query::StructSearch(_)) {
                    f.write_str("STRUCT ")?;
                }
                write!(f, "SEARCH {}", pattern(&s.pattern))?;
                if let Some(a) = &s.attr {
                    write!(f, " ON {}", name(a))?;
                }
                write!(f, " OVER {} {}", graph(&s.graph), time(&s.time))
            }
            Query::Compare(c) | Query::InverseCompare(c) => f.write_str(&compare(c)),
            Query::RelationSeek(s) => {
                write!(f, "SEEK {}, {} WHERE {}", side(&s.left), side(&s.right), relation(&s.relation))?;
                for a in &s.aux {
                    f.write_str(" AND ")?;
                    if a.negated {
                        f.write_str("NOT ")?;
                    }
                    f.write_str(&relation(&a.relation))?;
                    if let Some(l) = &a.at {
                        write!(f, " AT t={}", label(l))?;
                    }
                }
                Ok(())
            }
            Query::Connection { a, b, spec, time } => {
                write!(f, "CONNECTED({}, {}, {}) AT t={}", node(a), node(b), conn(spec), label(time))
            }
            Query::ConnectedSearch { from: Some(a), spec, time } => {
                write!(f, "NEIGHBORS({}, {}) {}", node(a), conn(spec), point_sel(time))
            }
            Query::ConnectedSearch { from: None, spec, time } => {
                write!(f, "PAIRS({}) {}", conn(spec), point_sel(time))
            }
            Query::ConnectionTimes { a, b, spec, within } => {
                write!(f, "TIMES WHERE CONNECTED({}, {}, {})", node(a), node(b), conn(spec))?;
                if let Some(r) = within {
                    write!(f, " DURING {}", range(r))?;
                }
                Ok(())
            }
            Query::Correlate(c) => {
                write!(f, "CORRELATE {} WITH {}", series(&c.left), series(&c.right))?;
                if c.lag != 0 {
                    write!(f, " LAG {}", c.lag)?;
                }
                if c.per_element {
                    f.write_str(" PER ELEMENT")?;
                }
                Ok(())
            }
        }
    }
}
