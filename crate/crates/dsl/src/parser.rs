//! Recursive-descent parser with precedence climbing for predicates.

use std::collections::BTreeMap;

use tgq_core::correlation::SeriesAggregate;
use tgq_core::graph::Direction;
use tgq_core::pattern::{
    ConfigMetric, DistClass, DistributionPattern, Motif, PatternSpec, PresenceClass, TrendClass,
};
use tgq_core::predicate::{Predicate, ValueConstraint};
use tgq_core::relation::{
    AllenRelation, PatternOp, PointRelation, RelationFamily, RelationSpec, SetOp, StructuralOp, ValueOp,
};
use tgq_core::structural::{ConnectionMode, ConnectionSpec};
use tgq_core::{AttributeValue, ElementRef, TimeLabel};

use crate::ast::*;
use crate::error::{DslError, Pos, Result};
use crate::lexer::{tokenize, Tok, Token};

/// Deepest nesting of parentheses and `NOT` accepted in a predicate.
pub const MAX_DEPTH: usize = 64;

pub struct Parser {
    toks: Vec<Token>,
    i: usize,
    depth: usize,
    expected: Vec<String>,
}

/// Parses one query without semantic validation.
pub fn parse_syntax(src: &str) -> Result<Query> {
    let mut p = Parser {
        toks: tokenize(src)?,
        i: 0,
        depth: 0,
        expected: Vec::new(),
    };
    let q = p.query()?;
    p.eat_sym(";");
    p.expect_eof()?;
    Ok(q)
}

fn int_label(v: f64, text: &str) -> Option<TimeLabel> {
    if text.contains(['.', 'e', 'E']) || v.fract() != 0.0 || v.abs() > 9.0e15 {
        None
    } else {
        Some(TimeLabel::Int(v as i64))
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].tok
    }

    fn peek_at(&self, n: usize) -> &Tok {
        let j = (self.i + n).min(self.toks.len() - 1);
        &self.toks[j].tok
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].pos
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].tok.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        self.expected.clear();
        t
    }

    fn error<T>(&mut self, what: &str) -> Result<T> {
        let mut expected = std::mem::take(&mut self.expected);
        if !what.is_empty() && !expected.iter().any(|e| e == what) {
            expected.push(what.to_string());
        }
        expected.sort();
        expected.dedup();
        Err(DslError::Parse {
            pos: self.pos(),
            message: format!("unexpected {}", self.peek()),
            expected,
        })
    }

    fn fail<T>(&self, message: String) -> Result<T> {
        Err(DslError::Parse {
            pos: self.pos(),
            message,
            expected: Vec::new(),
        })
    }

    fn at_kw(&mut self, kw: &str) -> bool {
        let hit = matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(kw));
        if !hit {
            self.expected.push(kw.to_string());
        }
        hit
    }

    fn eat_kw(&mut self, kw: &str) -> bool {
        if self.at_kw(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn kw(&mut self, kw: &str) -> Result<()> {
        if self.eat_kw(kw) {
            Ok(())
        } else {
            self.error(kw)
        }
    }

    fn at_sym(&mut self, s: &str) -> bool {
        let hit = matches!(self.peek(), Tok::Sym(x) if *x == s);
        if !hit {
            self.expected.push(format!("'{s}'"));
        }
        hit
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn sym(&mut self, s: &str) -> Result<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.error("")
        }
    }

    fn expect_eof(&mut self) -> Result<()> {
        if matches!(self.peek(), Tok::Eof) {
            Ok(())
        } else {
            self.expected.push("end of input".into());
            self.error("")
        }
    }

    fn word(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Tok::Word(w) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            _ => self.error(what),
        }
    }

    /// An attribute or series name: a word or a quoted string.
    fn name(&mut self, what: &str) -> Result<String> {
        match self.peek() {
            Tok::Word(w) => {
                let w = w.clone();
                self.bump();
                Ok(w)
            }
            Tok::Str(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => self.error(what),
        }
    }

    fn number(&mut self) -> Result<f64> {
        match self.peek() {
            Tok::Number(v, _) => {
                let v = *v;
                self.bump();
                Ok(v)
            }
            _ => self.error("number"),
        }
    }

    fn count(&mut self) -> Result<usize> {
        match self.peek().clone() {
            Tok::Number(v, text) if !text.contains(['.', 'e', 'E', '-']) && v <= 1.0e15 => {
                self.bump();
                Ok(v as usize)
            }
            _ => self.error("non-negative integer"),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        match self.peek().clone() {
            Tok::Number(v, text) if !text.contains(['.', 'e', 'E']) && v.abs() <= 1.0e15 => {
                self.bump();
                Ok(v as i64)
            }
            _ => self.error("integer"),
        }
    }

    fn var(&mut self) -> Result<String> {
        match self.peek() {
            Tok::Var(v) => {
                let v = v.clone();
                self.bump();
                Ok(v)
            }
            _ => self.error("?variable"),
        }
    }

    fn reference(&mut self) -> Result<ElementRef> {
        match self.peek().clone() {
            Tok::Ref(kind, id) => {
                self.bump();
                Ok(match kind.as_str() {
                    "node" => ElementRef::Node(id),
                    "edge" => ElementRef::Edge(id),
                    _ => ElementRef::Object(id),
                })
            }
            _ => self.error("node:/edge:/subset: reference"),
        }
    }

    fn ref_of(&mut self, kind: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ref(k, id) if k == kind => {
                self.bump();
                Ok(id)
            }
            _ => self.error(&format!("{kind}: reference")),
        }
    }

    fn label(&mut self) -> Result<TimeLabel> {
        match self.peek().clone() {
            Tok::Number(v, text) => match int_label(v, &text) {
                Some(l) => {
                    self.bump();
                    Ok(l)
                }
                None => self.fail(format!("time label {text} must be an integer or a quoted string")),
            },
            Tok::Str(s) => {
                self.bump();
                Ok(TimeLabel::parse_token(&s))
            }
            Tok::Word(w) => {
                self.bump();
                Ok(TimeLabel::parse_token(&w))
            }
            _ => self.error("time label"),
        }
    }

    fn range(&mut self) -> Result<Range> {
        self.sym("[")?;
        let a = self.label()?;
        self.sym(",")?;
        let b = self.label()?;
        self.sym("]")?;
        Ok((a, b))
    }

    /// `t=<label>` after `AT`.
    fn t_equals(&mut self) -> Result<TimeLabel> {
        self.kw("t")?;
        self.sym("=")?;
        self.label()
    }

    fn query(&mut self) -> Result<Query> {
        if self.eat_kw("LOOKUP") {
            let attr = self.name("attribute")?;
            self.kw("OF")?;
            let element = self.reference()?;
            self.kw("AT")?;
            let time = self.t_equals()?;
            return Ok(Query::Lookup { attr, element, time });
        }
        if self.eat_kw("FIND") {
            return self.find();
        }
        if self.eat_kw("CHARACTERIZE") {
            return Ok(Query::Characterize(self.scope()?));
        }
        if self.eat_kw("SEARCH") {
            return Ok(Query::PatternSearch(self.search(false)?));
        }
        if self.eat_kw("COMPARE") {
            let c = self.compare()?;
            return Ok(if c.is_inverse() {
                Query::InverseCompare(c)
            } else {
                Query::Compare(c)
            });
        }
        if self.eat_kw("SEEK") {
            return self.seek();
        }
        if self.eat_kw("CONNECTED") {
            self.sym("(")?;
            let a = self.ref_of("node")?;
            self.sym(",")?;
            let b = self.ref_of("node")?;
            let spec = if self.eat_sym(",") {
                self.conn_spec()?
            } else {
                ConnectionSpec::path()
            };
            self.sym(")")?;
            self.kw("AT")?;
            let time = self.t_equals()?;
            return Ok(Query::Connection { a, b, spec, time });
        }
        if self.eat_kw("NEIGHBORS") {
            self.sym("(")?;
            let a = self.ref_of("node")?;
            let spec = if self.eat_sym(",") {
                self.conn_spec()?
            } else {
                ConnectionSpec::path()
            };
            self.sym(")")?;
            let time = self.point_sel()?;
            return Ok(Query::ConnectedSearch {
                from: Some(a),
                spec,
                time,
            });
        }
        if self.eat_kw("PAIRS") {
            self.sym("(")?;
            let spec = self.conn_spec()?;
            self.sym(")")?;
            let time = self.point_sel()?;
            return Ok(Query::ConnectedSearch { from: None, spec, time });
        }
        if self.eat_kw("TIMES") {
            self.kw("WHERE")?;
            self.kw("CONNECTED")?;
            self.sym("(")?;
            let a = self.ref_of("node")?;
            self.sym(",")?;
            let b = self.ref_of("node")?;
            let spec = if self.eat_sym(",") {
                self.conn_spec()?
            } else {
                ConnectionSpec::path()
            };
            self.sym(")")?;
            let within = if self.eat_kw("DURING") { Some(self.range()?) } else { None };
            return Ok(Query::ConnectionTimes { a, b, spec, within });
        }
        if self.eat_kw("STRUCT") {
            if self.eat_kw("CHARACTERIZE") {
                return Ok(Query::StructCharacterize(self.scope()?));
            }
            if self.eat_kw("SEARCH") {
                return Ok(Query::StructSearch(self.search(true)?));
            }
            return self.error("");
        }
        if self.eat_kw("CORRELATE") {
            return self.correlate();
        }
        self.error("")
    }

    fn find(&mut self) -> Result<Query> {
        let mut targets = Vec::new();
        loop {
            if self.eat_kw("t") {
                targets.push(Target::Time);
            } else if self.eat_kw("g") {
                targets.push(Target::Graph);
            } else {
                return self.error("");
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        self.kw("WHERE")?;
        let predicate = self.predicate()?;
        let scope = if self.eat_kw("OF") {
            Some(FindScope::Element(self.reference()?))
        } else if self.eat_kw("IN") {
            Some(FindScope::Family(self.family()?))
        } else {
            None
        };
        let time = if self.eat_kw("AT") {
            Some(FindTime::At(self.t_equals()?))
        } else if self.eat_kw("DURING") {
            if self.eat_kw("ALL") {
                Some(FindTime::DuringAll)
            } else {
                let (a, b) = self.range()?;
                Some(FindTime::During(a, b))
            }
        } else {
            None
        };
        Ok(Query::InverseLookup(Find {
            targets,
            predicate,
            scope,
            time,
        }))
    }

    fn behavior(&mut self) -> Result<BehaviorKw> {
        for b in BehaviorKw::ALL {
            if let Some((first, second)) = b.keyword().split_once(' ') {
                if matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(first))
                    && matches!(self.peek_at(1), Tok::Word(w) if w.eq_ignore_ascii_case(second))
                {
                    self.bump();
                    self.bump();
                    return Ok(b);
                }
            } else if matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(b.keyword())) {
                self.bump();
                return Ok(b);
            }
        }
        self.expected.extend(BehaviorKw::ALL.iter().map(|b| b.keyword().to_string()));
        self.error("")
    }

    /// Length in tokens of the behaviour keyword at the cursor, if any.
    fn behavior_len(&self) -> Option<usize> {
        let is = |t: &Tok, kw: &str| matches!(t, Tok::Word(w) if w.eq_ignore_ascii_case(kw));
        for b in BehaviorKw::ALL {
            match b.keyword().split_once(' ') {
                Some((x, y)) if is(self.peek(), x) && is(self.peek_at(1), y) => return Some(2),
                None if is(self.peek(), b.keyword()) => return Some(1),
                _ => {}
            }
        }
        None
    }

    /// Whether a scope (rather than a pattern literal) starts at the cursor.
    fn scope_ahead(&self) -> bool {
        let Some(n) = self.behavior_len() else { return false };
        let is_of = |t: &Tok| matches!(t, Tok::Word(w) if w.eq_ignore_ascii_case("OF"));
        is_of(self.peek_at(n)) || (matches!(self.peek_at(n), Tok::Word(_) | Tok::Str(_)) && is_of(self.peek_at(n + 1)))
    }

    fn scope(&mut self) -> Result<Scope> {
        let behavior = self.behavior()?;
        let attr = if self.at_kw("OF") {
            None
        } else {
            Some(self.name("attribute")?)
        };
        self.kw("OF")?;
        let graph = self.graph()?;
        let time = self.time()?;
        Ok(Scope {
            behavior,
            attr,
            graph,
            time,
        })
    }

    fn side(&mut self) -> Result<Side> {
        let scope = self.scope()?;
        let having = if self.eat_kw("HAVING") {
            if self.pattern_ahead() {
                Some(Having::Pattern(self.pattern()?))
            } else {
                Some(Having::Value(self.constraint()?))
            }
        } else {
            None
        };
        Ok(Side { scope, having })
    }

    fn family(&mut self) -> Result<FamilyExpr> {
        if self.eat_kw("NODES") {
            return Ok(FamilyExpr::Nodes);
        }
        if self.eat_kw("EDGES") {
            return Ok(FamilyExpr::Edges);
        }
        if self.eat_kw("ELEMENTS") {
            return Ok(FamilyExpr::Elements);
        }
        if self.eat_kw("MEMBERS") {
            return Ok(FamilyExpr::Members(self.ref_of("subset")?));
        }
        if self.eat_kw("SUBSETS") {
            return Ok(FamilyExpr::Subsets);
        }
        if self.eat_kw("COMPONENTS") {
            return Ok(FamilyExpr::Components);
        }
        if self.eat_kw("KHOP") {
            let k = self.count()?;
            let center = if self.eat_kw("FROM") { Some(self.ref_of("node")?) } else { None };
            return Ok(FamilyExpr::KHop { k, center });
        }
        if self.eat_kw("PAIRS") {
            let within = if self.eat_kw("OF") { Some(self.ref_of("subset")?) } else { None };
            return Ok(FamilyExpr::Pairs(within));
        }
        self.error("")
    }

    fn graph(&mut self) -> Result<GraphExpr> {
        if let Tok::Var(_) = self.peek() {
            let var = self.var()?;
            let family = if self.eat_kw("IN") { Some(self.family()?) } else { None };
            return Ok(GraphExpr::Free { var, family });
        }
        if self.eat_kw("NODES") {
            return Ok(GraphExpr::AllNodes);
        }
        if self.eat_kw("EDGES") {
            return Ok(GraphExpr::AllEdges);
        }
        if self.eat_kw("PAIR") {
            self.sym("(")?;
            let a = self.ref_of("node")?;
            self.sym(",")?;
            let b = self.ref_of("node")?;
            self.sym(")")?;
            return Ok(GraphExpr::Pair(a, b));
        }
        if self.eat_sym("{") {
            let mut ids = vec![self.ref_of("node")?];
            while self.eat_sym(",") {
                ids.push(self.ref_of("node")?);
            }
            self.sym("}")?;
            return Ok(GraphExpr::Literal(ids));
        }
        if let Tok::Ref(..) = self.peek() {
            return Ok(GraphExpr::Ref(self.reference()?));
        }
        self.expected.push("?variable".into());
        self.expected.push("reference".into());
        self.error("")
    }

    fn time(&mut self) -> Result<TimeExpr> {
        if self.eat_kw("AT") {
            if let Tok::Var(_) = self.peek() {
                let var = self.var()?;
                let within = if self.eat_kw("IN") { Some(self.range()?) } else { None };
                return Ok(TimeExpr::AtFree { var, within });
            }
            return Ok(TimeExpr::At(self.t_equals()?));
        }
        if self.eat_kw("DURING") {
            if self.eat_kw("ALL") {
                return Ok(TimeExpr::DuringAll);
            }
            if let Tok::Var(_) = self.peek() {
                let var = self.var()?;
                let min_len = if self.eat_kw("MINLEN") { Some(self.count()?) } else { None };
                let within = if self.eat_kw("IN") { Some(self.range()?) } else { None };
                return Ok(TimeExpr::DuringFree { var, min_len, within });
            }
            let (a, b) = self.range()?;
            return Ok(TimeExpr::During(a, b));
        }
        self.error("")
    }

    fn point_sel(&mut self) -> Result<PointSel> {
        if !self.eat_kw("AT") {
            return Ok(PointSel::Free {
                var: "t".into(),
                within: None,
            });
        }
        if let Tok::Var(_) = self.peek() {
            let var = self.var()?;
            let within = if self.eat_kw("IN") { Some(self.range()?) } else { None };
            return Ok(PointSel::Free { var, within });
        }
        Ok(PointSel::At(self.t_equals()?))
    }

    fn search(&mut self, structural: bool) -> Result<Search> {
        let pattern = self.pattern()?;
        let attr = if !structural && self.eat_kw("ON") {
            Some(self.name("attribute")?)
        } else {
            None
        };
        self.kw("OVER")?;
        let graph = self.graph()?;
        let time = self.time()?;
        Ok(Search {
            pattern,
            attr,
            graph,
            time,
        })
    }

    fn pattern_ahead(&self) -> bool {
        let is = |t: &Tok, kw: &str| matches!(t, Tok::Word(w) if w.eq_ignore_ascii_case(kw));
        ["TREND", "DIST", "ASPECT", "PRESENCE", "CONFIG", "PAIRS", "CONFIG_TREND"]
            .iter()
            .any(|k| is(self.peek(), k))
    }

    fn class<T>(&mut self, what: &str, lookup: impl Fn(&str) -> Option<T>, all: Vec<&'static str>) -> Result<T> {
        if let Tok::Word(w) = self.peek() {
            if let Some(c) = lookup(w) {
                self.bump();
                return Ok(c);
            }
        }
        self.expected.extend(all.into_iter().map(str::to_string));
        self.error(what)
    }

    fn trend_class(&mut self) -> Result<TrendClass> {
        self.class("", TrendClass::from_name, TrendClass::ALL.iter().map(|c| c.name()).collect())
    }

    fn presence_class(&mut self) -> Result<PresenceClass> {
        self.class("", PresenceClass::from_name, PresenceClass::ALL.iter().map(|c| c.name()).collect())
    }

    fn metric(&mut self) -> Result<ConfigMetric> {
        self.class("", ConfigMetric::from_name, ConfigMetric::ALL.iter().map(|c| c.name()).collect())
    }

    fn frequencies<K: Ord + Copy>(&mut self, key: impl Fn(&mut Self) -> Result<K>) -> Result<BTreeMap<K, usize>> {
        self.sym("{")?;
        let mut out = BTreeMap::new();
        if !self.eat_sym("}") {
            loop {
                let k = key(self)?;
                self.sym(":")?;
                let n = self.count()?;
                if out.insert(k, n).is_some() {
                    return self.fail("class listed twice".into());
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.sym("}")?;
        }
        Ok(out)
    }

    fn pattern(&mut self) -> Result<PatternSpec> {
        if self.eat_kw("TREND") {
            return Ok(PatternSpec::Trend {
                class: self.trend_class()?,
            });
        }
        if self.eat_kw("DIST") {
            if self.eat_sym("(") {
                return self.dist_shape();
            }
            let class = self.class("", DistClass::from_name, DistClass::ALL.iter().map(|c| c.name()).collect())?;
            return Ok(PatternSpec::Distribution { class });
        }
        if self.eat_kw("ASPECT") {
            if self.eat_kw("TRENDS") {
                return Ok(PatternSpec::TrendsOverGraph {
                    frequencies: self.frequencies(|p| p.trend_class())?,
                });
            }
            self.kw("DISTS")?;
            self.sym("(")?;
            let (mut mean, mut stddev) = (None, None);
            loop {
                let which = self.word("mean or stddev")?;
                self.sym("=")?;
                let c = self.trend_class()?;
                let slot = if which.eq_ignore_ascii_case("mean") {
                    &mut mean
                } else if which.eq_ignore_ascii_case("stddev") {
                    &mut stddev
                } else {
                    return self.fail(format!("unknown field '{which}', expected mean or stddev"));
                };
                if slot.replace(c).is_some() {
                    return self.fail(format!("field '{which}' given twice"));
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.sym(")")?;
            return Ok(PatternSpec::DistributionOverTime { mean, stddev });
        }
        if self.eat_kw("PRESENCE") {
            return Ok(PatternSpec::Presence {
                class: self.presence_class()?,
            });
        }
        if self.eat_kw("CONFIG_TREND") {
            self.sym("(")?;
            let mut trends = BTreeMap::new();
            loop {
                let m = self.metric()?;
                self.sym("=")?;
                let c = self.trend_class()?;
                if trends.insert(m, c).is_some() {
                    return self.fail(format!("metric '{}' given twice", m.name()));
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.sym(")")?;
            return Ok(PatternSpec::ConfigurationTrend { trends });
        }
        if self.eat_kw("CONFIG") {
            self.sym("(")?;
            let mut metrics = BTreeMap::new();
            let mut motif = None;
            loop {
                if self.eat_kw("motif") {
                    self.sym("=")?;
                    let m = self.class("", Motif::from_name, Motif::ALL.iter().map(|m| m.name()).collect())?;
                    if motif.replace(m).is_some() {
                        return self.fail("motif given twice".into());
                    }
                } else {
                    let m = self.metric()?;
                    self.sym("=")?;
                    let v = self.number()?;
                    if metrics.insert(m, v).is_some() {
                        return self.fail(format!("metric '{}' given twice", m.name()));
                    }
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.sym(")")?;
            return Ok(PatternSpec::Configuration { metrics, motif });
        }
        if self.eat_kw("PAIRS") {
            return Ok(PatternSpec::PairsAggregate {
                frequencies: self.frequencies(|p| p.presence_class())?,
            });
        }
        self.error("pattern")
    }

    fn dist_shape(&mut self) -> Result<PatternSpec> {
        let mut fields: BTreeMap<&'static str, f64> = BTreeMap::new();
        let mut hist = None;
        loop {
            let field = self.word("field")?.to_ascii_lowercase();
            self.sym("=")?;
            if field == "hist" {
                self.sym("[")?;
                let mut h = vec![self.number()?];
                while self.eat_sym(",") {
                    h.push(self.number()?);
                }
                self.sym("]")?;
                if hist.replace(h).is_some() {
                    return self.fail("field 'hist' given twice".into());
                }
            } else {
                let key = match field.as_str() {
                    "mean" => "mean",
                    "stddev" => "stddev",
                    "min" => "min",
                    "max" => "max",
                    _ => return self.fail(format!("unknown distribution field '{field}'")),
                };
                let v = self.number()?;
                if fields.insert(key, v).is_some() {
                    return self.fail(format!("field '{key}' given twice"));
                }
            }
            if !self.eat_sym(",") {
                break;
            }
        }
        self.sym(")")?;
        let get = |k: &str| fields.get(k).copied();
        match (get("mean"), get("stddev"), get("min"), get("max"), hist) {
            (Some(mean), Some(stddev), Some(min), Some(max), Some(h)) => Ok(PatternSpec::DistributionShape {
                shape: DistributionPattern::from_summary(mean, stddev, min, max, h),
            }),
            _ => self.fail("a distribution shape needs mean, stddev, min, max and hist".into()),
        }
    }

    fn value(&mut self) -> Result<AttributeValue> {
        match self.peek().clone() {
            Tok::Number(v, _) => {
                self.bump();
                Ok(AttributeValue::Numeric(v))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(AttributeValue::Categorical(s))
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("TRUE") => {
                self.bump();
                Ok(AttributeValue::Boolean(true))
            }
            Tok::Word(w) if w.eq_ignore_ascii_case("FALSE") => {
                self.bump();
                Ok(AttributeValue::Boolean(false))
            }
            _ => self.error("value"),
        }
    }

    fn relop(&mut self) -> Option<ValueOp> {
        let op = match self.peek() {
            Tok::Sym("=") => ValueOp::Eq,
            Tok::Sym("!=") => ValueOp::Ne,
            Tok::Sym("<") => ValueOp::Lt,
            Tok::Sym("<=") => ValueOp::Le,
            Tok::Sym(">") => ValueOp::Gt,
            Tok::Sym(">=") => ValueOp::Ge,
            _ => {
                self.expected.extend(["'='", "'!='", "'<'", "'<='", "'>'", "'>='"].map(String::from));
                return None;
            }
        };
        self.bump();
        Some(op)
    }

    fn constraint(&mut self) -> Result<ValueConstraint> {
        if let Some(op) = self.relop() {
            return Ok(ValueConstraint::Compare { op, value: self.value()? });
        }
        if self.eat_kw("WITHIN") {
            let tol = self.number()?;
            if tol < 0.0 {
                return self.fail("tolerance must be non-negative".into());
            }
            self.kw("OF")?;
            return Ok(ValueConstraint::Compare {
                op: ValueOp::Within(tol),
                value: AttributeValue::Numeric(self.number()?),
            });
        }
        if self.eat_kw("BETWEEN") {
            let low = self.number()?;
            self.kw("AND")?;
            let high = self.number()?;
            return Ok(ValueConstraint::Between { low, high });
        }
        if self.eat_kw("IN") {
            self.sym("(")?;
            let mut values = vec![self.value()?];
            while self.eat_sym(",") {
                values.push(self.value()?);
            }
            self.sym(")")?;
            return Ok(ValueConstraint::OneOf { values });
        }
        self.error("")
    }

    fn predicate(&mut self) -> Result<Predicate> {
        let mut left = self.conjunction()?;
        while self.eat_kw("OR") {
            let right = self.conjunction()?;
            left = Predicate::Or {
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn conjunction(&mut self) -> Result<Predicate> {
        let mut left = self.negation()?;
        while self.eat_kw("AND") {
            let right = self.negation()?;
            left = Predicate::And {
                left: Box::new(left),
                right: Box::new(right),
            };
        }
        Ok(left)
    }

    fn nest<T>(&mut self, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        if self.depth >= MAX_DEPTH {
            return self.fail(format!("predicate nested deeper than {MAX_DEPTH}"));
        }
        self.depth += 1;
        let out = f(self);
        self.depth -= 1;
        out
    }

    fn negation(&mut self) -> Result<Predicate> {
        if self.eat_kw("NOT") {
            let inner = self.nest(|p| p.negation())?;
            return Ok(Predicate::Not { inner: Box::new(inner) });
        }
        if self.eat_sym("(") {
            let inner = self.nest(|p| p.predicate())?;
            self.sym(")")?;
            return Ok(inner);
        }
        let attr = self.name("attribute")?;
        let constraint = self.constraint()?;
        Ok(Predicate::Atom { attr, constraint })
    }

    fn conn_spec(&mut self) -> Result<ConnectionSpec> {
        let mode = if self.eat_kw("ADJACENT") {
            ConnectionMode::Adjacent
        } else if self.eat_kw("PATH") {
            ConnectionMode::Path
        } else {
            return self.error("");
        };
        let max_distance = if mode == ConnectionMode::Path && self.eat_sym("<=") {
            let k = self.count()?;
            if k == 0 {
                return self.fail("maximum distance must be at least 1".into());
            }
            Some(k)
        } else {
            None
        };
        let direction = if self.eat_kw("DIR") {
            if self.eat_kw("OUT") {
                Direction::Out
            } else if self.eat_kw("IN") {
                Direction::In
            } else if self.eat_kw("ANY") {
                Direction::Any
            } else {
                return self.error("");
            }
        } else {
            Direction::Any
        };
        let edge_predicate = if self.eat_kw("VIA") { Some(self.predicate()?) } else { None };
        Ok(ConnectionSpec {
            mode,
            max_distance,
            direction,
            edge_predicate,
        })
    }

    fn relation(&mut self) -> Result<RelationSpec> {
        if self.eat_kw("VALUE") {
            if self.eat_kw("WITHIN") {
                let tol = self.number()?;
                if tol < 0.0 {
                    return self.fail("tolerance must be non-negative".into());
                }
                return Ok(RelationSpec::Value(ValueOp::Within(tol)));
            }
            return match self.relop() {
                Some(op) => Ok(RelationSpec::Value(op)),
                None => self.error("WITHIN"),
            };
        }
        if self.eat_kw("PATTERN") {
            let op = self.class(
                "",
                |w| [PatternOp::Same, PatternOp::Different, PatternOp::Opposite].into_iter().find(|o| o.name().eq_ignore_ascii_case(w)),
                vec!["SAME", "DIFFERENT", "OPPOSITE"],
            )?;
            return Ok(RelationSpec::Pattern(op));
        }
        if self.eat_kw("POINT") {
            let op = self.class(
                "",
                |w| [PointRelation::Before, PointRelation::Same, PointRelation::After].into_iter().find(|o| o.name().eq_ignore_ascii_case(w)),
                vec!["BEFORE", "SAME", "AFTER"],
            )?;
            return Ok(RelationSpec::TemporalPoint(op));
        }
        if self.eat_kw("INTERVAL") {
            let op = self.class("", AllenRelation::from_name, AllenRelation::ALL.iter().map(|a| a.name()).collect())?;
            return Ok(RelationSpec::TemporalInterval(op));
        }
        if self.eat_kw("SET") {
            let ops = [SetOp::Equal, SetOp::Subset, SetOp::Superset, SetOp::Disjoint, SetOp::Overlapping];
            let op = self.class(
                "",
                |w| ops.into_iter().find(|o| o.name().eq_ignore_ascii_case(w)),
                ops.iter().map(|o| o.name()).collect(),
            )?;
            return Ok(RelationSpec::Set(op));
        }
        if self.eat_kw("STRUCT") {
            if self.eat_kw("DISTANCE") {
                self.sym("<=")?;
                return Ok(RelationSpec::Structural(StructuralOp::DistanceLe(self.count()?)));
            }
            let op = self.class(
                "",
                |w| {
                    [StructuralOp::Adjacent, StructuralOp::Connected, StructuralOp::ConfigurationEqual]
                        .into_iter()
                        .find(|o| o.name().eq_ignore_ascii_case(w))
                },
                vec!["ADJACENT", "CONNECTED", "CONFIGURATION_EQUAL", "DISTANCE"],
            )?;
            return Ok(RelationSpec::Structural(op));
        }
        self.expected.extend(["VALUE", "PATTERN", "POINT", "INTERVAL", "SET", "STRUCT"].map(String::from));
        self.error("")
    }

    fn relation_family(&mut self) -> Result<RelationFamily> {
        for f in RelationFamily::ALL {
            if self.eat_kw(family_keyword(f)) {
                return Ok(f);
            }
        }
        self.error("")
    }

    fn compare(&mut self) -> Result<Compare> {
        let left = self.side()?;
        self.kw("WITH")?;
        let right = if self.scope_ahead() {
            CompareRhs::Side(self.side()?)
        } else if self.pattern_ahead() {
            CompareRhs::Pattern(self.pattern()?)
        } else {
            CompareRhs::Value(self.value()?)
        };
        let using = if self.eat_kw("USING") {
            if self.eat_kw("FAMILY") {
                let mut f = vec![self.relation_family()?];
                while self.eat_sym(",") {
                    f.push(self.relation_family()?);
                }
                Some(Using::Families(f))
            } else {
                Some(Using::Relation(self.relation()?))
            }
        } else {
            None
        };
        let all_pairs = if self.eat_kw("ALL") {
            self.kw("PAIRS")?;
            true
        } else {
            false
        };
        Ok(Compare {
            left,
            right,
            using,
            all_pairs,
        })
    }

    fn seek(&mut self) -> Result<Query> {
        let left = self.side()?;
        self.sym(",")?;
        let right = self.side()?;
        self.kw("WHERE")?;
        let relation = self.relation()?;
        let mut aux = Vec::new();
        while self.eat_kw("AND") {
            let negated = self.eat_kw("NOT");
            let relation = self.relation()?;
            let at = if self.eat_kw("AT") { Some(self.t_equals()?) } else { None };
            aux.push(Aux { relation, negated, at });
        }
        Ok(Query::RelationSeek(Seek {
            left,
            right,
            relation,
            aux,
        }))
    }

    fn series(&mut self) -> Result<Series> {
        if self.eat_kw("EXTERNAL") {
            return Ok(Series::External(self.name("series name")?));
        }
        let aggregate = [SeriesAggregate::Mean, SeriesAggregate::Sum, SeriesAggregate::Min, SeriesAggregate::Max]
            .into_iter()
            .find(|a| {
                matches!(self.peek(), Tok::Word(w) if w.eq_ignore_ascii_case(a.name()))
                    && !matches!(self.peek_at(1), Tok::Word(w) if w.eq_ignore_ascii_case("OF"))
            });
        if aggregate.is_some() {
            self.bump();
        }
        let attr = self.name("attribute")?;
        self.kw("OF")?;
        let graph = self.graph()?;
        let time = self.time()?;
        Ok(Series::Graph {
            aggregate,
            attr,
            graph,
            time,
        })
    }

    fn correlate(&mut self) -> Result<Query> {
        let left = self.series()?;
        self.kw("WITH")?;
        let right = self.series()?;
        let lag = if self.eat_kw("LAG") { self.integer()? } else { 0 };
        let per_element = if self.eat_kw("PER") {
            self.kw("ELEMENT")?;
            true
        } else {
            false
        };
        Ok(Query::Correlate(Correlate {
            left,
            right,
            lag,
            per_element,
        }))
    }
}
