//! Flip generators acting on edge-labelled triangulations by the Ptolemy
//! rule, and symbolic checks of the group relations under that action.
//!
//! A generator `d(i,j,k,l)` acts on the quadrilateral with vertex set
//! `{i,j,k,l}`, sorted as `p<q<r<s`. It is applicable when the four sides
//! `pq, qr, rs, sp` are edges of the current state and one of the diagonals
//! `pr`, `qs` is present. The present diagonal (label `χ`) is replaced by the
//! other one, labelled `(pq·rs + qr·sp) / χ`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gamma::{self, Generator, Letter, RelationInstance, RelationKind, Word};
use crate::polygon::{flip_graph, Edge, PolygonError, Triangulation};
use crate::symexpr::{parse_expr, ExprError, RationalFunction};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ActionError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Gamma(#[from] gamma::GammaError),
    #[error("edge {0} has no label")]
    MissingLabel(Edge),
    #[error("{0} is not an edge of the triangulation")]
    StrayLabel(Edge),
    #[error("edge {0} carries the zero label")]
    ZeroLabel(Edge),
    #[error("bad edge key `{0}` (expected `i-j`)")]
    BadEdgeKey(String),
    #[error("label of edge {edge}: {source}")]
    Label { edge: String, source: ExprError },
    #[error("step {}: {generator} is not applicable", .step + 1)]
    NotApplicable { step: usize, generator: Generator },
}

/// What to do with a letter whose flip is undefined on the current state.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Policy {
    /// Leave the state unchanged and flag the step.
    #[default]
    Skip,
    /// Stop with [`ActionError::NotApplicable`].
    Abort,
}

/// A triangulation with a nonzero rational-function label on every boundary
/// edge and diagonal.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelledTriangulation {
    base: Triangulation,
    labels: BTreeMap<Edge, RationalFunction>,
}

/// The data a flip needs: sorted quadrilateral, the diagonal being removed,
/// and the one replacing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipSite {
    pub quad: [usize; 4],
    pub old: Edge,
    pub new: Edge,
}

impl LabelledTriangulation {
    pub fn new(base: Triangulation, labels: BTreeMap<Edge, RationalFunction>) -> Result<Self, ActionError> {
        let edges = base.edges();
        for e in &edges {
            match labels.get(e) {
                None => return Err(ActionError::MissingLabel(*e)),
                Some(f) if f.is_zero() => return Err(ActionError::ZeroLabel(*e)),
                _ => {}
            }
        }
        if let Some(e) = labels.keys().find(|e| !edges.contains(e)) {
            return Err(ActionError::StrayLabel(*e));
        }
        Ok(LabelledTriangulation { base, labels })
    }

    /// Labels every edge with its own fresh variable: `b{i}` on the boundary
    /// edge from `i` to `i+1` (cyclically) and `x{p}_{r}` on diagonal `pr`.
    pub fn fresh(base: Triangulation) -> Self {
        let n = base.n();
        let mut labels = BTreeMap::new();
        for i in 1..=n {
            labels.insert(Edge::of(i, i % n + 1), RationalFunction::named(&format!("b{i}")));
        }
        for e in base.diagonals() {
            labels.insert(*e, RationalFunction::named(&format!("x{}_{}", e.lo(), e.hi())));
        }
        LabelledTriangulation { base, labels }
    }

    /// The pentagon fan `{13, 14}` with `a..e` on edges `12, 23, 34, 45, 51`
    /// and `x, y` on diagonals `13, 14`.
    pub fn pentagon_fan() -> Self {
        let base = Triangulation::fan(5, 1).expect("pentagon");
        let names = [((1, 2), "a"), ((2, 3), "b"), ((3, 4), "c"), ((4, 5), "d"), ((5, 1), "e"), ((1, 3), "x"), ((1, 4), "y")];
        let labels = names
            .iter()
            .map(|&((i, j), name)| (Edge::of(i, j), RationalFunction::named(name)))
            .collect();
        LabelledTriangulation { base, labels }
    }

    pub fn base(&self) -> &Triangulation {
        &self.base
    }

    pub fn labels(&self) -> &BTreeMap<Edge, RationalFunction> {
        &self.labels
    }

    pub fn label(&self, e: &Edge) -> Option<&RationalFunction> {
        self.labels.get(e)
    }

    fn label_of(&self, a: usize, b: usize) -> &RationalFunction {
        &self.labels[&Edge::of(a, b)]
    }

    /// Where `g` would flip, or `None` if it is not applicable here.
    pub fn flip_site(&self, g: &Generator) -> Option<FlipSite> {
        let quad = g.sorted();
        let (old, new) = self.base.quad_flip(quad)?;
        Some(FlipSite { quad, old, new })
    }

    pub fn is_applicable(&self, g: &Generator) -> bool {
        self.flip_site(g).is_some()
    }

    /// Applies the Ptolemy flip of `g`.
    pub fn apply_generator(&self, g: &Generator) -> Result<Self, ActionError> {
        let site = self.flip_site(g).ok_or(ActionError::NotApplicable { step: 0, generator: *g })?;
        Ok(self.apply_site(&site))
    }

    fn apply_site(&self, site: &FlipSite) -> Self {
        let [p, q, r, s] = site.quad;
        let opposite_a = self.label_of(p, q).mul(self.label_of(r, s));
        let opposite_b = self.label_of(q, r).mul(self.label_of(s, p));
        let chi = &self.labels[&site.old];
        let new_label = opposite_a.add(&opposite_b).div(chi).expect("labels are nonzero");
        let (base, _) = self.base.flip(&site.old).expect("site diagonal is present");
        let mut labels = self.labels.clone();
        labels.remove(&site.old);
        labels.insert(site.new, new_label);
        LabelledTriangulation { base, labels }
    }

    /// Applies the letters left to right. Inverse letters toggle the same
    /// diagonal, since every generator acts as an involution.
    pub fn apply_word(&self, word: &Word, policy: Policy) -> Result<ActionReport, ActionError> {
        let mut state = self.clone();
        let mut steps = Vec::with_capacity(word.len());
        for (i, letter) in word.letters().iter().enumerate() {
            match state.flip_site(&letter.generator) {
                Some(site) => {
                    state = state.apply_site(&site);
                    steps.push(StepReport {
                        letter: *letter,
                        applied: true,
                        removed: Some(site.old),
                        added: Some(site.new),
                        new_label: Some(state.labels[&site.new].clone()),
                    });
                }
                None if policy == Policy::Abort => {
                    return Err(ActionError::NotApplicable { step: i, generator: letter.generator });
                }
                None => steps.push(StepReport { letter: *letter, applied: false, removed: None, added: None, new_label: None }),
            }
        }
        let identity = state == *self;
        Ok(ActionReport { word: word.clone(), initial: self.clone(), steps, final_state: state, identity })
    }

    /// Every generator applicable to the current state, one per diagonal.
    pub fn applicable_generators(&self) -> Vec<Generator> {
        self.base
            .diagonals()
            .iter()
            .map(|d| {
                let quad = self.base.quad_of(d).expect("diagonal present");
                Generator::from_array(quad).expect("distinct vertices")
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn from_json(text: &str) -> Result<Self, StateParseError> {
        let repr: StateRepr = serde_json::from_str(text).map_err(|e| StateParseError::Json(e.to_string()))?;
        Self::try_from(repr).map_err(StateParseError::Invalid)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateParseError {
    #[error("malformed state JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Invalid(ActionError),
}

#[derive(Serialize, Deserialize)]
struct StateRepr {
    n: usize,
    diagonals: Vec<[usize; 2]>,
    labels: BTreeMap<String, String>,
}

fn parse_edge_key(key: &str) -> Result<Edge, ActionError> {
    let bad = || ActionError::BadEdgeKey(key.to_string());
    let (a, b) = key.split_once('-').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    Edge::new(a, b).map_err(|_| bad())
}

impl TryFrom<StateRepr> for LabelledTriangulation {
    type Error = ActionError;
    fn try_from(r: StateRepr) -> Result<Self, Self::Error> {
        let diagonals = r
            .diagonals
            .iter()
            .map(|&[a, b]| Edge::new(a, b))
            .collect::<Result<Vec<_>, _>>()?;
        let base = Triangulation::new(r.n, diagonals)?;
        let mut labels = BTreeMap::new();
        for (key, text) in &r.labels {
            let edge = parse_edge_key(key)?;
            let f = parse_expr(text).map_err(|source| ActionError::Label { edge: key.clone(), source })?;
            labels.insert(edge, f);
        }
        LabelledTriangulation::new(base, labels)
    }
}

impl Serialize for LabelledTriangulation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let repr = StateRepr {
            n: self.base.n(),
            diagonals: self.base.diagonals().iter().map(|e| [e.lo(), e.hi()]).collect(),
            labels: self.labels.iter().map(|(e, f)| (e.to_string(), f.to_string())).collect(),
        };
        repr.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabelledTriangulation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = StateRepr::deserialize(d)?;
        LabelledTriangulation::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub letter: Letter,
    pub applied: bool,
    pub removed: Option<Edge>,
    pub added: Option<Edge>,
    pub new_label: Option<RationalFunction>,
}

/// Outcome of applying a word; `identity` is true iff the final state equals
/// the initial one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActionReport {
    pub word: Word,
    pub initial: LabelledTriangulation,
    pub steps: Vec<StepReport>,
    pub final_state: LabelledTriangulation,
    pub identity: bool,
}

impl ActionReport {
    pub fn all_applied(&self) -> bool {
        self.steps.iter().all(|s| s.applied)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "word: {}", if self.word.is_empty() { "(empty)".to_string() } else { self.word.to_string() });
        let _ = writeln!(out, "initial: {}", self.initial.base().key());
        for (i, step) in self.steps.iter().enumerate() {
            match (&step.removed, &step.added, &step.new_label) {
                (Some(old), Some(new), Some(label)) => {
                    let _ = writeln!(out, "step {}: {}  {} -> {}  label {}", i + 1, step.letter, old, new, label);
                }
                _ => {
                    let _ = writeln!(out, "step {}: {}  not applicable, skipped", i + 1, step.letter);
                }
            }
        }
        let _ = writeln!(out, "final labels:");
        for (e, f) in self.final_state.labels() {
            let _ = writeln!(out, "  {e}: {f}");
        }
        let _ = writeln!(out, "identity: {}", self.identity);
        out
    }
}

/// The five flips around the pentagon starting from the fan at vertex 1:
/// they create diagonals 35, 25, 24, 14, 13 in turn.
pub fn lemma1_word() -> Word {
    Word::from_generators([
        gamma::d(1, 3, 4, 5),
        gamma::d(1, 2, 3, 5),
        gamma::d(2, 3, 4, 5),
        gamma::d(1, 2, 4, 5),
        gamma::d(1, 2, 3, 4),
    ])
}

/// Runs the five-flip cycle on the symbolic pentagon fan.
pub fn verify_lemma1() -> ActionReport {
    LabelledTriangulation::pentagon_fan()
        .apply_word(&lemma1_word(), Policy::Abort)
        .expect("every flip of the cycle is applicable")
}

/// Per-instance verdict of a relation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub admissible_states: usize,
    pub holds: bool,
    pub vacuous: bool,
}

/// Checks one relation instance on the given initial states, quantifying
/// only over states where every letter involved is applicable.
pub fn check_relation(instance: &RelationInstance, states: &[LabelledTriangulation]) -> RelationCheck {
    let mut admissible = 0;
    let mut holds = true;
    match instance {
        RelationInstance::FarComm(g, h) => {
            for s in states {
                let gh = s.apply_word(&Word::from_generators([*g, *h]), Policy::Abort);
                let hg = s.apply_word(&Word::from_generators([*h, *g]), Policy::Abort);
                if let (Ok(a), Ok(b)) = (gh, hg) {
                    admissible += 1;
                    holds &= a.final_state == b.final_state;
                }
            }
        }
        RelationInstance::Symmetry { arrangement, canonical } => {
            let consistent = Generator::from_array(*arrangement).ok() == Some(*canonical)
                && gamma::symmetry_orbit(*arrangement).len() <= 8;
            holds &= consistent;
            let g = Generator::from_array(*arrangement).expect("valid arrangement");
            for s in states {
                if let (Ok(a), Ok(b)) = (s.apply_generator(&g), s.apply_generator(canonical)) {
                    admissible += 1;
                    holds &= a == b;
                }
            }
        }
        RelationInstance::Involution(_) | RelationInstance::Pentagon(_) => {
            let (lhs, _) = instance.sides();
            for s in states {
                if let Ok(report) = s.apply_word(&lhs, Policy::Abort) {
                    admissible += 1;
                    holds &= report.identity;
                }
            }
        }
    }
    RelationCheck { relation: instance.to_string(), admissible_states: admissible, holds: holds && admissible > 0, vacuous: admissible == 0 }
}

/// Every triangulation of the n-gon with fresh symbolic labels.
pub fn all_fresh_states(n: usize) -> Result<Vec<LabelledTriangulation>, ActionError> {
    Ok(flip_graph(n)?.vertices().iter().cloned().map(LabelledTriangulation::fresh).collect())
}

/// Checks every instance of a relation family over all fresh-labelled
/// triangulations of the n-gon.
pub fn check_relations(n: usize, kind: RelationKind) -> Result<Vec<RelationCheck>, ActionError> {
    let states = all_fresh_states(n)?;
    let instances = gamma::relation_instances(n, kind)?;
    Ok(instances.iter().map(|inst| check_relation(inst, &states)).collect())
}

/// Per-family totals of a relation run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationFamily {
    pub kind: RelationKind,
    pub instances: usize,
    pub checked: usize,
    pub vacuous: usize,
    pub failures: Vec<String>,
}

/// Every relation family on the n-gon. `holds` requires that no
/// non-vacuous instance fails and that each nonempty family has at least
/// one non-vacuous instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationSuite {
    pub n: usize,
    pub families: Vec<RelationFamily>,
    pub holds: bool,
}

pub fn relation_suite(n: usize) -> Result<RelationSuite, ActionError> {
    let states = all_fresh_states(n)?;
    let mut families = Vec::new();
    for kind in RelationKind::ALL {
        if n < kind.min_n() {
            continue;
        }
        let instances = gamma::relation_instances(n, kind)?;
        let checks: Vec<RelationCheck> = instances.iter().map(|inst| check_relation(inst, &states)).collect();
        families.push(RelationFamily {
            kind,
            instances: checks.len(),
            checked: checks.iter().filter(|c| !c.vacuous).count(),
            vacuous: checks.iter().filter(|c| c.vacuous).count(),
            failures: checks.iter().filter(|c| !c.vacuous && !c.holds).map(|c| c.relation.clone()).collect(),
        });
    }
    let holds = !families.is_empty() && families.iter().all(|f| f.failures.is_empty() && (f.instances == 0 || f.checked > 0));
    Ok(RelationSuite { n, families, holds })
}

/// A random walk of `len` flips; each step picks one current diagonal
/// uniformly and flips it.
pub fn random_applicable_word<R: Rng>(start: &Triangulation, len: usize, rng: &mut R) -> Word {
    let mut t = start.clone();
    let mut word = Word::empty();
    for _ in 0..len {
        let diags: Vec<Edge> = t.diagonals().iter().copied().collect();
        if diags.is_empty() {
            break;
        }
        let d = diags[rng.random_range(0..diags.len())];
        let quad = t.quad_of(&d).expect("diagonal present");
        word.push(Generator::from_array(quad).expect("distinct"), false);
        t = t.flip(&d).expect("diagonal present").0;
    }
    word
}

/// Verdict of a batch of random flip walks checked for monomial
/// denominators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LaurentReport {
    pub n: usize,
    pub max_len: usize,
    pub seed: u64,
    pub trials: usize,
    pub labels_checked: usize,
    pub violations: Vec<String>,
    pub holds: bool,
}

/// Walks `trials` random applicable words, each of length drawn from
/// `1..=max_len`, from the fresh-labelled fan of the n-gon at vertex 1, and
/// checks that every label produced along the way has a monomial
/// denominator.
pub fn laurent_walks(n: usize, max_len: usize, seed: u64, trials: usize) -> Result<LaurentReport, ActionError> {
    let start = LabelledTriangulation::fresh(Triangulation::fan(n, 1)?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels_checked = 0;
    let mut violations = Vec::new();
    for trial in 0..trials {
        let len = if max_len == 0 { 0 } else { rng.random_range(1..=max_len) };
        let word = random_applicable_word(start.base(), len, &mut rng);
        let report = start.apply_word(&word, Policy::Abort)?;
        for (i, step) in report.steps.iter().enumerate() {
            let label = step.new_label.as_ref().expect("abort policy applies every step");
            labels_checked += 1;
            if !label.is_laurent() {
                violations.push(format!("trial {trial}, step {}: {label}", i + 1));
            }
        }
    }
    let holds = violations.is_empty();
    Ok(LaurentReport { n, max_len, seed, trials, labels_checked, violations, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma::d;

    fn rf(s: &str) -> RationalFunction {
        parse_expr(s).unwrap()
    }

    #[test]
    fn first_flip_of_the_cycle() {
        let s = LabelledTriangulation::pentagon_fan();
        let t = s.apply_generator(&d(1, 3, 4, 5)).unwrap();
        assert_eq!(t.base().key(), "1-3,3-5");
        assert_eq!(t.label(&Edge::of(3, 5)).unwrap(), &rf("(x*d + c*e)/y"));
        assert_eq!(t.apply_generator(&d(1, 3, 4, 5)).unwrap(), s);
    }

    #[test]
    fn square_ptolemy() {
        let base = Triangulation::fan(4, 1).unwrap();
        let labels = [((1, 2), "a"), ((2, 3), "b"), ((3, 4), "c"), ((4, 1), "d"), ((1, 3), "x")]
            .iter()
            .map(|&((i, j), n)| (Edge::of(i, j), rf(n)))
            .collect();
        let s = LabelledTriangulation::new(base, labels).unwrap();
        let t = s.apply_generator(&d(1, 2, 3, 4)).unwrap();
        assert_eq!(t.label(&Edge::of(2, 4)).unwrap(), &rf("(a*c + b*d)/x"));
    }

    #[test]
    fn lemma1_cycle() {
        let report = verify_lemma1();
        assert!(report.identity);
        assert_eq!(report.final_state.label(&Edge::of(1, 3)).unwrap(), &rf("x"));
        assert_eq!(report.final_state.label(&Edge::of(1, 4)).unwrap(), &rf("y"));
        let created: Vec<Edge> = report.steps.iter().map(|s| s.added.unwrap()).collect();
        assert_eq!(created, vec![Edge::of(3, 5), Edge::of(2, 5), Edge::of(2, 4), Edge::of(1, 4), Edge::of(1, 3)]);
        // step 2 applies the rule to quadrilateral 1235 with sides a, b, z, e and diagonal x
        let z = rf("(x*d + c*e)/y");
        let expected = rf("a").mul(&z).add(&rf("b*e")).div(&rf("x")).unwrap();
        assert_eq!(report.steps[1].new_label.as_ref().unwrap(), &expected);
    }

    #[test]
    fn empty_and_single_words() {
        let s = LabelledTriangulation::pentagon_fan();
        assert!(s.apply_word(&Word::empty(), Policy::Abort).unwrap().identity);
        let r = s.apply_word(&Word::from_generators([d(1, 2, 3, 4)]), Policy::Abort).unwrap();
        assert!(!r.identity);
        assert_eq!(r.final_state.base().key(), "1-4,2-4");
    }

    #[test]
    fn inapplicable_letters() {
        let s = LabelledTriangulation::pentagon_fan();
        // quadrilateral 2345 is not a union of two triangles of the fan
        let w = Word::from_generators([d(2, 3, 4, 5), d(1, 2, 3, 4)]);
        let r = s.apply_word(&w, Policy::Skip).unwrap();
        assert!(!r.steps[0].applied);
        assert!(r.steps[1].applied);
        assert_eq!(s.apply_word(&w, Policy::Abort), Err(ActionError::NotApplicable { step: 0, generator: d(2, 3, 4, 5) }));
        assert!(matches!(s.apply_generator(&d(1, 2, 3, 6)), Err(ActionError::NotApplicable { .. })));
    }

    #[test]
    fn far_commuting_pair_on_hexagon_fan() {
        let s = LabelledTriangulation::fresh(Triangulation::fan(6, 1).unwrap());
        let inst = RelationInstance::FarComm(d(1, 2, 3, 4), d(1, 4, 5, 6));
        let check = check_relation(&inst, std::slice::from_ref(&s));
        assert_eq!(check.admissible_states, 1);
        assert!(check.holds);
    }

    #[test]
    fn vacuous_checks_are_not_successes() {
        let s = LabelledTriangulation::pentagon_fan();
        let check = check_relation(&RelationInstance::Involution(d(2, 3, 4, 5)), &[s]);
        assert!(check.vacuous);
        assert!(!check.holds);
    }

    #[test]
    fn state_json_round_trip() {
        let text = r#"{"n":5, "diagonals":[[1,3],[1,4]], "labels": {"1-2":"a", "2-3":"b", "3-4":"c", "4-5":"d", "5-1":"e", "1-3":"x", "1-4":"y"}}"#;
        let s = LabelledTriangulation::from_json(text).unwrap();
        assert_eq!(s, LabelledTriangulation::pentagon_fan());
        let back = LabelledTriangulation::from_json(&s.to_json().to_string()).unwrap();
        assert_eq!(back, s);
        let missing = r#"{"n":5, "diagonals":[[1,3],[1,4]], "labels": {"1-2":"a"}}"#;
        assert!(matches!(LabelledTriangulation::from_json(missing), Err(StateParseError::Invalid(ActionError::MissingLabel(_)))));
        let zero = text.replace("\"a\"", "\"b - b\"");
        assert!(matches!(LabelledTriangulation::from_json(&zero), Err(StateParseError::Invalid(ActionError::ZeroLabel(_)))));
    }

    #[test]
    fn short_laurent_walks() {
        let r = laurent_walks(6, 6, 7, 10).unwrap();
        assert!(r.holds, "{:?}", r.violations);
        assert!(r.labels_checked > 0);
        assert_eq!(r, laurent_walks(6, 6, 7, 10).unwrap());
    }

    #[test]
    fn pentagon_relation_suite() {
        let suite = relation_suite(5).unwrap();
        assert!(suite.holds, "{suite:?}");
        assert_eq!(suite.families.len(), 4);
    }
}
