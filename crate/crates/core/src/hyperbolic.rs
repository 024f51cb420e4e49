//! Decorated ideal polygons in the upper half-plane, used as a numeric
//! oracle for the Ptolemy action.
//!
//! Ideal vertices sit on the real line or at `∞`. Each carries a horocycle:
//! a circle tangent to the real line of Euclidean diameter `d` at a finite
//! point, or the horizontal line at height `t` at `∞`. The λ-length of two
//! decorated vertices is
//!
//! ```text
//! finite p, q:       |p - q| / sqrt(d_p d_q)
//! ∞ and finite p:    sqrt(t / d_p)
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::gamma::Word;
use crate::polygon::{Edge, Triangulation};
use crate::ptolemy::{lemma1_word, random_applicable_word, LabelledTriangulation, Policy};
use crate::symexpr::{ExprError, Var};

/// Relative tolerance for realization round trips and Ptolemy residuals.
pub const GEOMETRY_TOL: f64 = 1e-9;
/// Relative tolerance for symbolic labels against measured λ-lengths.
pub const CROSSCHECK_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HyperbolicError {
    #[error("λ-length {0} must be positive and finite")]
    NonPositive(f64),
    #[error("horocycle parameter {0} must be positive and finite")]
    BadHorocycle(f64),
    #[error("need at least 3 vertices, got {0}")]
    TooFew(usize),
    #[error("vertices are not in cyclic boundary order")]
    NotCyclic,
    #[error("vertex index {0} out of range")]
    BadIndex(usize),
    #[error("no embedded solution for the new vertex")]
    Degenerate,
    #[error("label of edge {edge} evaluates to {value}")]
    NonPositiveLabel { edge: Edge, value: f64 },
    #[error("label of edge {edge}: {source}")]
    Eval { edge: Edge, source: ExprError },
}

/// A point of the boundary of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IdealVertex {
    Infinity,
    Finite(f64),
}

impl IdealVertex {
    fn sort_key(self) -> f64 {
        match self {
            IdealVertex::Infinity => f64::INFINITY,
            IdealVertex::Finite(x) => x,
        }
    }
}

impl fmt::Display for IdealVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IdealVertex::Infinity => f.write_str("inf"),
            IdealVertex::Finite(x) => write!(f, "{x}"),
        }
    }
}

impl Serialize for IdealVertex {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            IdealVertex::Infinity => s.serialize_str("inf"),
            IdealVertex::Finite(x) => s.serialize_f64(*x),
        }
    }
}

/// Ideal polygon with one horocycle per vertex. The horocycle parameter is a
/// diameter at finite vertices and a height at `∞`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecoratedIdealPolygon {
    vertices: Vec<IdealVertex>,
    #[serde(rename = "horodiameters")]
    horocycles: Vec<f64>,
}

fn positive(x: f64) -> bool {
    x.is_finite() && x > 0.0
}

impl DecoratedIdealPolygon {
    /// Validates the cyclic order: read cyclically, the vertices are `∞` (if
    /// present) followed by the finite ones ascending.
    pub fn new(vertices: Vec<IdealVertex>, horocycles: Vec<f64>) -> Result<Self, HyperbolicError> {
        if vertices.len() < 3 || horocycles.len() != vertices.len() {
            return Err(HyperbolicError::TooFew(vertices.len().min(horocycles.len())));
        }
        if let Some(h) = horocycles.iter().find(|h| !positive(**h)) {
            return Err(HyperbolicError::BadHorocycle(*h));
        }
        let keys: Vec<f64> = vertices.iter().map(|v| v.sort_key()).collect();
        if keys.iter().any(|k| k.is_nan() || *k == f64::NEG_INFINITY) {
            return Err(HyperbolicError::NotCyclic);
        }
        let len = keys.len();
        let descents = (0..len).filter(|&i| keys[i] >= keys[(i + 1) % len]).count();
        if descents != 1 {
            return Err(HyperbolicError::NotCyclic);
        }
        Ok(DecoratedIdealPolygon { vertices, horocycles })
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[IdealVertex] {
        &self.vertices
    }

    pub fn horocycles(&self) -> &[f64] {
        &self.horocycles
    }

    fn check_index(&self, i: usize) -> Result<(), HyperbolicError> {
        if i < self.len() {
            Ok(())
        } else {
            Err(HyperbolicError::BadIndex(i))
        }
    }

    /// λ-length between vertices `u` and `v` (0-based, distinct).
    pub fn lambda_length(&self, u: usize, v: usize) -> f64 {
        assert!(u != v && u < self.len() && v < self.len(), "distinct vertex indices in range");
        let (hu, hv) = (self.horocycles[u], self.horocycles[v]);
        match (self.vertices[u], self.vertices[v]) {
            (IdealVertex::Finite(p), IdealVertex::Finite(q)) => (p - q).abs() / (hu * hv).sqrt(),
            (IdealVertex::Infinity, IdealVertex::Finite(_)) => (hu / hv).sqrt(),
            (IdealVertex::Finite(_), IdealVertex::Infinity) => (hv / hu).sqrt(),
            (IdealVertex::Infinity, IdealVertex::Infinity) => unreachable!("at most one vertex at infinity"),
        }
    }

    /// Multiplies the horocycle parameter at `i` by `factor`.
    pub fn rescale_horocycle(&self, i: usize, factor: f64) -> Result<Self, HyperbolicError> {
        self.check_index(i)?;
        if !positive(factor) {
            return Err(HyperbolicError::BadHorocycle(factor));
        }
        let mut out = self.clone();
        out.horocycles[i] *= factor;
        Ok(out)
    }

    /// Inserts a vertex `w` between cyclic positions `i` and `i+1` with
    /// `λ(i, w) = m` and `λ(i+1, w) = n`. The new vertex lands on the arc
    /// between them that holds no other vertex, which is the root keeping
    /// the polygon embedded. Returns the polygon and the index of `w`.
    pub fn attach_triangle(&self, i: usize, m: f64, n: f64) -> Result<(Self, usize), HyperbolicError> {
        self.check_index(i)?;
        for x in [m, n] {
            if !positive(x) {
                return Err(HyperbolicError::NonPositive(x));
            }
        }
        let j = (i + 1) % self.len();
        let (du, dv) = (self.horocycles[i], self.horocycles[j]);
        let (w, dw) = match (self.vertices[i], self.vertices[j]) {
            (IdealVertex::Finite(p), IdealVertex::Finite(q)) => {
                let rho = (m / n) * (du / dv).sqrt();
                let w = if p < q {
                    (p + rho * q) / (1.0 + rho)
                } else {
                    // wrap-around edge: the outside root
                    if (1.0 - rho).abs() < 1e-15 {
                        return Err(HyperbolicError::Degenerate);
                    }
                    (p - rho * q) / (1.0 - rho)
                };
                (w, (w - p).powi(2) / (m * m * du))
            }
            (IdealVertex::Infinity, IdealVertex::Finite(q)) => (q - n * (dv * du).sqrt() / m, du / (m * m)),
            (IdealVertex::Finite(p), IdealVertex::Infinity) => (p + m * (du * dv).sqrt() / n, dv / (n * n)),
            (IdealVertex::Infinity, IdealVertex::Infinity) => unreachable!("at most one vertex at infinity"),
        };
        if !w.is_finite() || !positive(dw) {
            return Err(HyperbolicError::Degenerate);
        }
        let mut vertices = self.vertices.clone();
        let mut horocycles = self.horocycles.clone();
        vertices.insert(i + 1, IdealVertex::Finite(w));
        horocycles.insert(i + 1, dw);
        let out = DecoratedIdealPolygon::new(vertices, horocycles).map_err(|_| HyperbolicError::Degenerate)?;
        Ok((out, i + 1))
    }

    /// `|λ_AB λ_CD + λ_BC λ_DA - λ_AC λ_BD| / (λ_AC λ_BD)` for four vertices
    /// in cyclic order.
    pub fn ptolemy_residual(&self, [a, b, c, d]: [usize; 4]) -> f64 {
        let l = |x, y| self.lambda_length(x, y);
        let diag = l(a, c) * l(b, d);
        (l(a, b) * l(c, d) + l(b, c) * l(d, a) - diag).abs() / diag
    }

    /// Largest residual over all quadruples of vertices.
    pub fn max_ptolemy_residual(&self) -> f64 {
        let n = self.len();
        let mut worst: f64 = 0.0;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    for d in c + 1..n {
                        worst = worst.max(self.ptolemy_residual([a, b, c, d]));
                    }
                }
            }
        }
        worst
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

/// The ideal triangle `A = ∞` (height 1), `B = 0` (diameter `1/c²`),
/// `C = a/(bc)` (diameter `1/b²`), with `λ_BC = a`, `λ_AC = b`, `λ_AB = c`.
pub fn realize_triangle(a: f64, b: f64, c: f64) -> Result<DecoratedIdealPolygon, HyperbolicError> {
    for x in [a, b, c] {
        if !positive(x) {
            return Err(HyperbolicError::NonPositive(x));
        }
    }
    DecoratedIdealPolygon::new(
        vec![IdealVertex::Infinity, IdealVertex::Finite(0.0), IdealVertex::Finite(a / (b * c))],
        vec![1.0, 1.0 / (c * c), 1.0 / (b * b)],
    )
}

fn rel_err(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}

/// Positive values of every label of a labelled triangulation.
pub fn evaluate_labels(
    state: &LabelledTriangulation,
    assignment: &HashMap<Var, f64>,
) -> Result<BTreeMap<Edge, f64>, HyperbolicError> {
    state
        .labels()
        .iter()
        .map(|(e, f)| {
            let value = f.eval_f64(assignment).map_err(|source| HyperbolicError::Eval { edge: *e, source })?;
            if positive(value) {
                Ok((*e, value))
            } else {
                Err(HyperbolicError::NonPositiveLabel { edge: *e, value })
            }
        })
        .collect()
}

/// Realizes a triangulation with positive edge values as a decorated ideal
/// polygon. Polygon vertex `k` (1-based) becomes index `k - 1`; vertex 1 sits
/// at `∞` with height 1 and vertex 2 at 0.
pub fn realize_values(base: &Triangulation, values: &BTreeMap<Edge, f64>) -> Result<DecoratedIdealPolygon, HyperbolicError> {
    let value = |a: usize, b: usize| values[&Edge::of(a, b)];
    let triangles = base.triangles();
    let first = triangles.iter().find(|t| t[0] == 1 && t[1] == 2).expect("edge 12 lies in one triangle");
    let k = first[2];
    let mut poly = realize_triangle(value(2, k), value(1, k), value(1, 2))?;
    let mut order = vec![1, 2, k];
    let mut done = vec![false; triangles.len()];
    let mut remaining = triangles.len() - 1;
    done[triangles.iter().position(|t| t == first).expect("present")] = true;
    while remaining > 0 {
        let mut progressed = false;
        for (idx, t) in triangles.iter().enumerate() {
            if done[idx] {
                continue;
            }
            let known: Vec<usize> = t.iter().copied().filter(|v| order.contains(v)).collect();
            if known.len() == 3 {
                done[idx] = true;
                remaining -= 1;
                progressed = true;
                continue;
            }
            if known.len() != 2 {
                continue;
            }
            let w = *t.iter().find(|v| !order.contains(v)).expect("one new vertex");
            let pu = order.iter().position(|&v| v == known[0]).expect("known");
            let pv = order.iter().position(|&v| v == known[1]).expect("known");
            let len = order.len();
            let i = if (pu + 1) % len == pv { pu } else { pv };
            let (u, v) = (order[i], order[(i + 1) % len]);
            let (next, at) = poly.attach_triangle(i, value(u, w), value(v, w))?;
            poly = next;
            order.insert(at, w);
            done[idx] = true;
            remaining -= 1;
            progressed = true;
        }
        assert!(progressed, "triangles of a triangulation are connected by diagonals");
    }
    debug_assert!(order.iter().enumerate().all(|(i, &v)| v == i + 1));
    Ok(poly)
}

/// Realizes a labelled triangulation at a positive assignment of its
/// variables.
pub fn realize_labelled_triangulation(
    state: &LabelledTriangulation,
    assignment: &HashMap<Var, f64>,
) -> Result<DecoratedIdealPolygon, HyperbolicError> {
    realize_values(state.base(), &evaluate_labels(state, assignment)?)
}

/// Worst relative error between prescribed edge values and the λ-lengths
/// measured on a realization.
pub fn round_trip_error(poly: &DecoratedIdealPolygon, values: &BTreeMap<Edge, f64>) -> f64 {
    values
        .iter()
        .map(|(e, v)| rel_err(poly.lambda_length(e.lo() - 1, e.hi() - 1), *v))
        .fold(0.0, f64::max)
}

/// Applies `word` symbolically and compares each new label, evaluated at
/// `assignment`, with the λ-length of the new diagonal measured on the
/// realization of `state`. Returns the worst relative error.
pub fn crosscheck_word(
    state: &LabelledTriangulation,
    word: &Word,
    assignment: &HashMap<Var, f64>,
) -> Result<f64, HyperbolicError> {
    let poly = realize_labelled_triangulation(state, assignment)?;
    let report = state.apply_word(word, Policy::Skip).expect("skip policy never fails");
    let mut worst: f64 = 0.0;
    for step in report.steps.iter().filter(|s| s.applied) {
        let edge = step.added.expect("applied step");
        let label = step.new_label.as_ref().expect("applied step");
        let expected = label.eval_f64(assignment).map_err(|source| HyperbolicError::Eval { edge, source })?;
        worst = worst.max(rel_err(poly.lambda_length(edge.lo() - 1, edge.hi() - 1), expected));
    }
    Ok(worst)
}

/// Log-uniform draw from `[0.1, 10]`.
pub fn log_uniform<R: Rng>(rng: &mut R) -> f64 {
    10f64.powf(rng.random_range(-1.0..=1.0))
}

/// Aggregate of a batch of seeded trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSummary {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub max_ptolemy_residual: f64,
    pub max_round_trip_error: f64,
    pub max_crosscheck_error: Option<f64>,
}

impl OracleSummary {
    pub fn passes(&self) -> bool {
        self.max_ptolemy_residual < GEOMETRY_TOL
            && self.max_round_trip_error < GEOMETRY_TOL
            && self.max_crosscheck_error.is_none_or(|e| e < CROSSCHECK_TOL)
    }
}

/// Random edge values on the fan of the n-gon at vertex 1, realized and
/// re-measured. Checks the round trip and the Ptolemy residual of every
/// quadruple.
pub fn random_polygon_trials(n: usize, seed: u64, trials: usize) -> Result<OracleSummary, HyperbolicError> {
    if n < 3 {
        return Err(HyperbolicError::TooFew(n));
    }
    let base = Triangulation::fan(n, 1).expect("n >= 3");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut residual, mut round_trip): (f64, f64) = (0.0, 0.0);
    for _ in 0..trials {
        let values: BTreeMap<Edge, f64> = base.edges().into_iter().map(|e| (e, log_uniform(&mut rng))).collect();
        let poly = realize_values(&base, &values)?;
        round_trip = round_trip.max(round_trip_error(&poly, &values));
        residual = residual.max(poly.max_ptolemy_residual());
    }
    Ok(OracleSummary {
        n,
        seed,
        trials,
        max_ptolemy_residual: residual,
        max_round_trip_error: round_trip,
        max_crosscheck_error: None,
    })
}

fn random_assignment<R: Rng>(state: &LabelledTriangulation, rng: &mut R) -> HashMap<Var, f64> {
    let vars: std::collections::BTreeSet<Var> = state.labels().values().flat_map(|f| f.vars()).collect();
    vars.into_iter().map(|v| (v, log_uniform(rng))).collect()
}

/// Symbolic flip labels against measured λ-lengths. On the pentagon with
/// `len = None` every trial runs the five-flip cycle on the symbolic fan;
/// otherwise each trial walks a random applicable word of length `len` from
/// the fresh-labelled fan of the n-gon.
pub fn crosscheck_trials(n: usize, len: Option<usize>, seed: u64, trials: usize) -> Result<OracleSummary, HyperbolicError> {
    if n < 4 {
        return Err(HyperbolicError::TooFew(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (state, fixed_word) = match len {
        None if n == 5 => (LabelledTriangulation::pentagon_fan(), Some(lemma1_word())),
        _ => (LabelledTriangulation::fresh(Triangulation::fan(n, 1).expect("n >= 4")), None),
    };
    let walk_len = len.unwrap_or(2 * n);
    let (mut residual, mut round_trip, mut cross): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for _ in 0..trials {
        let assignment = random_assignment(&state, &mut rng);
        let word = match &fixed_word {
            Some(w) => w.clone(),
            None => random_applicable_word(state.base(), walk_len, &mut rng),
        };
        let values = evaluate_labels(&state, &assignment)?;
        let poly = realize_values(state.base(), &values)?;
        round_trip = round_trip.max(round_trip_error(&poly, &values));
        residual = residual.max(poly.max_ptolemy_residual());
        cross = cross.max(crosscheck_word(&state, &word, &assignment)?);
    }
    Ok(OracleSummary {
        n,
        seed,
        trials,
        max_ptolemy_residual: residual,
        max_round_trip_error: round_trip,
        max_crosscheck_error: Some(cross),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_expr;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1.0)
    }

    fn poly(vs: &[Option<f64>], hs: &[f64]) -> DecoratedIdealPolygon {
        let vertices = vs.iter().map(|v| v.map_or(IdealVertex::Infinity, IdealVertex::Finite)).collect();
        DecoratedIdealPolygon::new(vertices, hs.to_vec()).unwrap()
    }

    #[test]
    fn lambda_length_examples() {
        let p = poly(&[None, Some(0.0), Some(3.0)], &[1.0, 1.0, 1.0]);
        assert_eq!(p.lambda_length(0, 1), 1.0);
        assert_eq!(p.lambda_length(1, 2), 3.0);
        let p = poly(&[None, Some(0.0), Some(3.0)], &[4.0, 0.25, 1.0]);
        assert!(close(p.lambda_length(0, 1), 4.0, 1e-15));
        assert_eq!(p.lambda_length(1, 0), p.lambda_length(0, 1));
    }

    #[test]
    fn lambda_on_vertical_geodesic_matches_distance() {
        // hyperbolic distance along x = 0 from height u to height t is ∫ dy/y
        let (t, u) = (3.0_f64, 0.2_f64);
        let steps = 20_000;
        let h = (t - u) / steps as f64;
        let f = |y: f64| 1.0 / y;
        let mut simpson = f(u) + f(t);
        for k in 1..steps {
            let y = u + k as f64 * h;
            simpson += if k % 2 == 1 { 4.0 } else { 2.0 } * f(y);
        }
        let distance = simpson * h / 3.0;
        let p = poly(&[None, Some(0.0), Some(1.0)], &[t, u, 1.0]);
        assert!(close(p.lambda_length(0, 1), (distance / 2.0).exp(), 1e-10));
    }

    #[test]
    fn finite_pair_agrees_with_mobius_image() {
        // z -> -1/(z - p) sends p to ∞ with horocycle height 1/d_p and scales
        // the horocycle at q by |q - p|^-2
        let (p, q, dp, dq) = (0.7_f64, 2.9_f64, 0.3_f64, 1.7_f64);
        let finite = poly(&[None, Some(p), Some(q)], &[1.0, dp, dq]);
        let image = poly(&[None, Some(-1.0 / (q - p)), Some(5.0)], &[1.0 / dp, dq / (q - p).powi(2), 1.0]);
        assert!(close(finite.lambda_length(1, 2), image.lambda_length(0, 1), 1e-14));
    }

    #[test]
    fn rejects_bad_polygons() {
        let bad = DecoratedIdealPolygon::new(
            vec![IdealVertex::Finite(0.0), IdealVertex::Finite(2.0), IdealVertex::Finite(1.0), IdealVertex::Finite(3.0)],
            vec![1.0; 4],
        );
        assert_eq!(bad, Err(HyperbolicError::NotCyclic));
        let rotated = DecoratedIdealPolygon::new(
            vec![IdealVertex::Finite(1.0), IdealVertex::Infinity, IdealVertex::Finite(0.0)],
            vec![1.0; 3],
        );
        assert!(rotated.is_ok());
        assert!(DecoratedIdealPolygon::new(vec![IdealVertex::Infinity, IdealVertex::Finite(0.0)], vec![1.0; 2]).is_err());
        assert!(matches!(
            DecoratedIdealPolygon::new(vec![IdealVertex::Infinity, IdealVertex::Finite(0.0), IdealVertex::Finite(1.0)], vec![1.0, -1.0, 1.0]),
            Err(HyperbolicError::BadHorocycle(_))
        ));
    }

    #[test]
    fn triangle_closed_form() {
        let t = realize_triangle(1.0, 1.0, 1.0).unwrap();
        assert_eq!(t.vertices()[2], IdealVertex::Finite(1.0));
        assert_eq!(t.horocycles(), &[1.0, 1.0, 1.0]);
        let t = realize_triangle(2.0, 3.0, 5.0).unwrap();
        assert!(close(t.horocycles()[1], 1.0 / 25.0, 1e-15));
        assert!(close(t.horocycles()[2], 1.0 / 9.0, 1e-15));
        match t.vertices()[2] {
            IdealVertex::Finite(x) => assert!(close(x, 2.0 / 15.0, 1e-15)),
            _ => panic!("finite"),
        }
        assert!(close(t.lambda_length(1, 2), 2.0, 1e-12));
        assert!(close(t.lambda_length(0, 2), 3.0, 1e-12));
        assert!(close(t.lambda_length(0, 1), 5.0, 1e-12));
        assert_eq!(realize_triangle(0.0, 1.0, 1.0), Err(HyperbolicError::NonPositive(0.0)));
    }

    #[test]
    fn unit_quadrilateral() {
        let t = realize_triangle(1.0, 1.0, 1.0).unwrap();
        let (q, w) = t.attach_triangle(1, 1.0, 1.0).unwrap();
        assert_eq!(w, 2);
        assert_eq!(q.len(), 4);
        // sides 01, 12, 23, 30 and diagonal 13 are all 1
        for (a, b) in [(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)] {
            assert!(close(q.lambda_length(a, b), 1.0, 1e-12), "{a}{b}");
        }
        assert!(close(q.lambda_length(0, 2), 2.0, 1e-12));
        assert!(q.ptolemy_residual([0, 1, 2, 3]) < 1e-15);
    }

    #[test]
    fn attach_cases_round_trip() {
        let t = realize_triangle(1.3, 0.7, 2.1).unwrap();
        for i in 0..3 {
            let (q, w) = t.attach_triangle(i, 0.4, 3.3).unwrap();
            let (u, v) = (if w == 0 { q.len() - 1 } else { w - 1 }, (w + 1) % q.len());
            assert!(close(q.lambda_length(u, w), 0.4, 1e-10));
            assert!(close(q.lambda_length(v, w), 3.3, 1e-10));
        }
        // wrap edge between two finite vertices
        let p = poly(&[Some(0.0), Some(1.0), Some(2.0)], &[1.0, 0.5, 2.0]);
        let (q, w) = p.attach_triangle(2, 1.5, 0.6).unwrap();
        assert_eq!(w, 3);
        assert!(close(q.lambda_length(2, 3), 1.5, 1e-10));
        assert!(close(q.lambda_length(0, 3), 0.6, 1e-10));
        assert!(q.max_ptolemy_residual() < 1e-12);
    }

    #[test]
    fn pentagon_realization() {
        let state = LabelledTriangulation::pentagon_fan();
        let vals = [("a", 1.0), ("b", 1.0), ("c", 1.0), ("d", 1.0), ("e", 1.0), ("x", 2.0), ("y", 2.0)];
        let assignment: HashMap<Var, f64> = vals.iter().map(|(n, v)| (Var::new(n).unwrap(), *v)).collect();
        let p = realize_labelled_triangulation(&state, &assignment).unwrap();
        assert!(close(p.lambda_length(2, 4), 1.5, 1e-12));
        let ones: HashMap<Var, f64> = vals.iter().map(|(n, _)| (Var::new(n).unwrap(), 1.0)).collect();
        let p = realize_labelled_triangulation(&state, &ones).unwrap();
        for e in state.base().edges() {
            assert!(close(p.lambda_length(e.lo() - 1, e.hi() - 1), 1.0, 1e-12));
        }
    }

    #[test]
    fn realization_errors() {
        let base = Triangulation::fan(4, 1).unwrap();
        let mut labels: BTreeMap<Edge, _> = base.edges().into_iter().map(|e| (e, parse_expr("a").unwrap())).collect();
        labels.insert(Edge::of(1, 3), parse_expr("a - 2").unwrap());
        let state = LabelledTriangulation::new(base, labels).unwrap();
        let at: HashMap<Var, f64> = [(Var::new("a").unwrap(), 1.0)].into_iter().collect();
        assert!(matches!(realize_labelled_triangulation(&state, &at), Err(HyperbolicError::NonPositiveLabel { .. })));
        assert!(matches!(realize_labelled_triangulation(&state, &HashMap::new()), Err(HyperbolicError::Eval { .. })));
    }

    #[test]
    fn rescaling_covariance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let base = Triangulation::fan(6, 1).unwrap();
        let values: BTreeMap<Edge, f64> = base.edges().into_iter().map(|e| (e, log_uniform(&mut rng))).collect();
        let p = realize_values(&base, &values).unwrap();
        let s = 1.7;
        let q = p.rescale_horocycle(3, s * s).unwrap();
        for a in 0..6 {
            for b in 0..6 {
                if a == b {
                    continue;
                }
                let expected = if a == 3 || b == 3 { p.lambda_length(a, b) / s } else { p.lambda_length(a, b) };
                assert!(close(q.lambda_length(a, b), expected, 1e-14));
            }
        }
        assert!(q.max_ptolemy_residual() < 1e-12);
    }

    #[test]
    fn json_dump() {
        let t = realize_triangle(2.0, 3.0, 5.0).unwrap();
        let v = t.to_json();
        assert_eq!(v["vertices"][0], "inf");
        assert_eq!(v["vertices"][1], 0.0);
        assert_eq!(v["horodiameters"][0], 1.0);
    }

    #[test]
    fn seeded_trials_pass() {
        let s = random_polygon_trials(4, 11, 20).unwrap();
        assert!(s.passes(), "{s:?}");
        assert_eq!(s, random_polygon_trials(4, 11, 20).unwrap());
        let c = crosscheck_trials(5, None, 11, 10).unwrap();
        assert!(c.passes(), "{c:?}");
        let c = crosscheck_trials(6, Some(6), 2, 5).unwrap();
        assert!(c.passes(), "{c:?}");
    }
}
