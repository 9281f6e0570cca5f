//! Graph-independent checks on a parsed query: which references and times
//! each behaviour accepts, and which parts of a query may be free.

use tgq_core::pattern::PatternSpec;
use tgq_core::task::{AspectAxis, Behavior, GraphKind, TimeKind};
use tgq_core::ElementRef;

use crate::ast::*;
use crate::error::{DslError, Result};

fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(DslError::Validation(msg.into()))
}

pub fn behavior(kw: BehaviorKw) -> Behavior {
    match kw {
        BehaviorKw::Value => Behavior::Value,
        BehaviorKw::Dist => Behavior::Distribution,
        BehaviorKw::Trend => Behavior::Trend,
        BehaviorKw::AspectTrends => Behavior::Aspect(AspectAxis::TrendsOverGraph),
        BehaviorKw::AspectDists => Behavior::Aspect(AspectAxis::DistributionOverTime),
        BehaviorKw::Presence => Behavior::Presence,
        BehaviorKw::Config => Behavior::Configuration,
        BehaviorKw::Pairs => Behavior::PairsAggregate,
        BehaviorKw::ConfigTrend => Behavior::ConfigurationTrend,
        BehaviorKw::Ref => Behavior::Reference,
    }
}

/// The behaviour whose characteristic a search pattern is matched against.
pub fn pattern_behavior(p: &PatternSpec) -> Option<BehaviorKw> {
    Some(match p {
        PatternSpec::Trend { .. } => BehaviorKw::Trend,
        PatternSpec::Distribution { .. } | PatternSpec::DistributionShape { .. } => BehaviorKw::Dist,
        PatternSpec::TrendsOverGraph { .. } => BehaviorKw::AspectTrends,
        PatternSpec::DistributionOverTime { .. } => BehaviorKw::AspectDists,
        PatternSpec::Presence { .. } => BehaviorKw::Presence,
        PatternSpec::Configuration { .. } => BehaviorKw::Config,
        PatternSpec::PairsAggregate { .. } => BehaviorKw::Pairs,
        PatternSpec::ConfigurationTrend { .. } => BehaviorKw::ConfigTrend,
        PatternSpec::Exact { .. } => return None,
    })
}

pub fn family_kind(f: &FamilyExpr) -> GraphKind {
    match f {
        FamilyExpr::Nodes | FamilyExpr::Edges | FamilyExpr::Elements | FamilyExpr::Members(_) => GraphKind::Element,
        FamilyExpr::Subsets | FamilyExpr::Components | FamilyExpr::KHop { .. } => GraphKind::Subset,
        FamilyExpr::Pairs(_) => GraphKind::Pair,
    }
}

fn graph_fits(g: &GraphExpr, want: GraphKind) -> bool {
    if want == GraphKind::Any {
        return true;
    }
    match g {
        GraphExpr::Ref(ElementRef::Object(_)) => want != GraphKind::Pair,
        GraphExpr::Ref(_) => want == GraphKind::Element,
        GraphExpr::AllNodes | GraphExpr::AllEdges | GraphExpr::Literal(_) => want == GraphKind::Subset,
        GraphExpr::Pair(..) => want == GraphKind::Pair,
        GraphExpr::Free { family: None, .. } => true,
        GraphExpr::Free { family: Some(f), .. } => family_kind(f) == want,
    }
}

fn kind_name(k: GraphKind) -> &'static str {
    match k {
        GraphKind::Element => "an element (node:, edge: or subset: as one object)",
        GraphKind::Subset => "a subset (subset:, NODES, EDGES, {...} or a subset family)",
        GraphKind::Pair => "a node pair (PAIR(...) or PAIRS)",
        GraphKind::Any => "any reference",
    }
}

fn check_time(t: &TimeExpr, want: TimeKind, who: &str) -> Result<()> {
    match (want, t.is_point()) {
        (TimeKind::Point, false) => return invalid(format!("{who} needs a time point (AT ...)")),
        (TimeKind::Interval, true) => return invalid(format!("{who} needs a time interval (DURING ...)")),
        _ => {}
    }
    if let TimeExpr::DuringFree { min_len: Some(0), .. } = t {
        return invalid("MINLEN must be at least 1");
    }
    Ok(())
}

fn check_scope(s: &Scope) -> Result<()> {
    let kw = s.behavior.keyword();
    let b = behavior(s.behavior);
    match (&s.attr, b.needs_attr()) {
        (None, true) => return invalid(format!("{kw} needs an attribute")),
        (Some(a), false) => return invalid(format!("{kw} takes no attribute, got '{a}'")),
        _ => {}
    }
    if !graph_fits(&s.graph, b.graph_kind()) {
        return invalid(format!("{kw} applies to {}", kind_name(b.graph_kind())));
    }
    check_time(&s.time, b.time_kind(), kw)
}

fn check_side(s: &Side) -> Result<()> {
    check_scope(&s.scope)?;
    let kw = s.scope.behavior.keyword();
    match &s.having {
        Some(Having::Value(_)) if s.scope.behavior != BehaviorKw::Value => {
            invalid(format!("a value constraint cannot filter {kw}"))
        }
        Some(Having::Pattern(p)) => match pattern_behavior(p) {
            Some(pb) if behavior(pb).pattern_kind() == behavior(s.scope.behavior).pattern_kind() => Ok(()),
            _ => invalid(format!("pattern constraint does not apply to {kw}")),
        },
        _ => Ok(()),
    }
}

fn check_search(s: &Search, structural: bool) -> Result<()> {
    let Some(kw) = pattern_behavior(&s.pattern) else {
        return invalid("exact patterns cannot be written in a query");
    };
    if kw.is_structural() != structural {
        return invalid(if structural {
            "STRUCT SEARCH takes a structural pattern (PRESENCE, CONFIG, PAIRS, CONFIG_TREND)"
        } else {
            "structural patterns are searched with STRUCT SEARCH"
        });
    }
    check_scope(&Scope {
        behavior: kw,
        attr: s.attr.clone(),
        graph: s.graph.clone(),
        time: s.time.clone(),
    })?;
    if !s.graph.is_free() && !s.time.is_free() {
        return invalid("SEARCH needs a free graph (?g) or time (?t) reference");
    }
    Ok(())
}

fn check_series(s: &Series) -> Result<()> {
    if let Series::Graph { graph, time, .. } = s {
        if graph.is_free() || time.is_free() {
            return invalid("correlated series take fixed references");
        }
        if matches!(graph, GraphExpr::Pair(..)) {
            return invalid("a node pair carries no attribute series");
        }
    }
    Ok(())
}

/// Checks quadrant and field rules the parser cannot express.
pub fn validate(q: &Query) -> Result<()> {
    match q {
        Query::Lookup { .. } => Ok(()),
        Query::InverseLookup(f) => {
            let has = |t: Target| f.targets.iter().filter(|x| **x == t).count();
            if has(Target::Time) > 1 || has(Target::Graph) > 1 {
                return invalid("FIND lists a target twice");
            }
            if has(Target::Time) == 1 && matches!(f.time, Some(FindTime::At(_))) {
                return invalid("FIND t conflicts with a fixed time AT t=...");
            }
            if has(Target::Graph) == 1 && matches!(f.scope, Some(FindScope::Element(_))) {
                return invalid("FIND g conflicts with a fixed element OF ...");
            }
            if let Some(FindScope::Family(fam)) = &f.scope {
                if family_kind(fam) != GraphKind::Element {
                    return invalid("FIND ranges over elements: NODES, EDGES, ELEMENTS or MEMBERS");
                }
            }
            Ok(())
        }
        Query::Characterize(s) | Query::StructCharacterize(s) => {
            let structural = matches!(q, Query::StructCharacterize(_));
            if s.behavior.is_structural() != structural {
                return invalid(if structural {
                    "STRUCT CHARACTERIZE takes PRESENCE, CONFIG, PAIRS or CONFIG_TREND"
                } else {
                    "structural behaviours are characterized with STRUCT CHARACTERIZE"
                });
            }
            check_scope(s)?;
            if s.is_free() {
                return invalid("CHARACTERIZE takes fixed references; use SEARCH for free ones");
            }
            Ok(())
        }
        Query::PatternSearch(s) => check_search(s, false),
        Query::StructSearch(s) => check_search(s, true),
        Query::Compare(c) | Query::InverseCompare(c) => {
            check_side(&c.left)?;
            if let CompareRhs::Side(s) = &c.right {
                check_side(s)?;
            }
            if c.is_inverse() {
                if !matches!(c.right, CompareRhs::Side(_)) {
                    return invalid("an inverse comparison needs a behaviour scope on both sides");
                }
                return Ok(());
            }
            if matches!(c.using, Some(Using::Families(_))) {
                return invalid("USING FAMILY applies when a side is free or constrained");
            }
            if c.all_pairs {
                return invalid("ALL PAIRS applies when a side is free or constrained");
            }
            let left = c.left.scope.behavior;
            match &c.right {
                CompareRhs::Value(_) if left != BehaviorKw::Value => {
                    invalid("only a VALUE scope compares with a literal value")
                }
                CompareRhs::Pattern(p) => match pattern_behavior(p) {
                    Some(pb) if behavior(pb).pattern_kind() == behavior(left).pattern_kind() => Ok(()),
                    _ => invalid(format!("pattern literal does not match {}", left.keyword())),
                },
                _ => Ok(()),
            }
        }
        Query::RelationSeek(s) => {
            check_side(&s.left)?;
            check_side(&s.right)
        }
        Query::Connection { .. } | Query::ConnectedSearch { .. } | Query::ConnectionTimes { .. } => Ok(()),
        Query::Correlate(c) => {
            check_series(&c.left)?;
            check_series(&c.right)?;
            if matches!((&c.left, &c.right), (Series::External(_), Series::External(_))) {
                return invalid("at least one correlated series must come from the graph");
            }
            let point = |s: &Series| matches!(s, Series::Graph { time, .. } if time.is_point());
            if (point(&c.left) || point(&c.right)) && c.lag != 0 {
                return invalid("LAG needs series over an interval");
            }
            if c.per_element {
                match (&c.left, &c.right) {
                    (
                        Series::Graph { aggregate: None, attr: a, graph: ga, time: ta },
                        Series::Graph { aggregate: None, attr: b, graph: gb, time: tb },
                    ) if a != b && ga == gb && ta == tb && !ta.is_point() => {
                        if !graph_fits(ga, GraphKind::Subset) || matches!(ga, GraphExpr::Ref(ElementRef::Node(_) | ElementRef::Edge(_))) {
                            return invalid("PER ELEMENT needs a subset");
                        }
                    }
                    _ => return invalid("PER ELEMENT needs two attributes of one subset over one interval"),
                }
            }
            Ok(())
        }
    }
}
