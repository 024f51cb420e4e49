//! Flip matrices acting on triangle areas.
//!
//! The flip of quadrilateral `ijkl` from diagonal `ik` to `jl` gets the 2×2
//! matrix
//!
//! ```text
//! [ (ζk-ζj)/(ζl-ζj)   (ζi-ζj)/(ζl-ζj) ]
//! [ (ζk-ζl)/(ζj-ζl)   (ζi-ζl)/(ζj-ζl) ]
//! ```
//!
//! whose columns sum to 1, so the total area is preserved. On the pentagon
//! the 2×2 blocks are embedded into 3×3 matrices acting on the three
//! triangle areas, and the five-flip cycle multiplies out to the identity.

use std::collections::HashMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gamma::Generator;
use crate::polygon::Triangulation;
use crate::symexpr::{parse_expr, RationalFunction, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KorepanovError {
    #[error("coincident ζ arguments make a denominator vanish")]
    CoincidentZeta,
    #[error("matrix is singular")]
    Singular,
    #[error("expected a {expected} matrix, got {rows}x{cols}")]
    Shape { expected: &'static str, rows: usize, cols: usize },
    #[error("dimension mismatch: {0}x{1} times {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("{0} is not applicable to this triangulation")]
    NotApplicable(Generator),
}

/// A dense matrix of rational functions.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RFMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<RationalFunction>,
}

impl RFMatrix {
    pub fn from_rows(rows: Vec<Vec<RationalFunction>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(r >= 1 && c >= 1, "matrix dimensions must be positive");
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        RFMatrix { rows: r, cols: c, entries: rows.into_iter().flatten().collect() }
    }

    /// Parses a grid of expression strings. Panics on malformed input; meant
    /// for literal tables.
    pub fn from_exprs(rows: &[&[&str]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|s| parse_expr(s).expect("valid literal")).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![RationalFunction::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = RationalFunction::one();
        }
        RFMatrix { rows: n, cols: n, entries }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RationalFunction {
        &self.entries[i * self.cols + j]
    }

    fn set(&mut self, i: usize, j: usize, f: RationalFunction) {
        self.entries[i * self.cols + j] = f;
    }

    pub fn mul(&self, other: &RFMatrix) -> Result<RFMatrix, KorepanovError> {
        if self.cols != other.rows {
            return Err(KorepanovError::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = RationalFunction::zero();
                for k in 0..self.cols {
                    let (a, b) = (self.get(i, k), other.get(k, j));
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                entries.push(acc);
            }
        }
        Ok(RFMatrix { rows: self.rows, cols: other.cols, entries })
    }

    pub fn column_sums(&self) -> Vec<RationalFunction> {
        (0..self.cols)
            .map(|j| (0..self.rows).fold(RationalFunction::zero(), |acc, i| acc.add(self.get(i, j))))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == RFMatrix::identity(self.rows)
    }

    /// Entries of `self - I` that are nonzero, as `(row, col, value)`.
    pub fn residual_from_identity(&self) -> Vec<(usize, usize, RationalFunction)> {
        let id = RFMatrix::identity(self.rows.max(self.cols));
        let mut out = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                let r = self.get(i, j).sub(id.get(i, j));
                if !r.is_zero() {
                    out.push((i, j, r));
                }
            }
        }
        out
    }

    pub fn determinant_2x2(&self) -> Result<RationalFunction, KorepanovError> {
        self.expect_2x2()?;
        Ok(self.get(0, 0).mul(self.get(1, 1)).sub(&self.get(0, 1).mul(self.get(1, 0))))
    }

    fn expect_2x2(&self) -> Result<(), KorepanovError> {
        if self.rows == 2 && self.cols == 2 {
            Ok(())
        } else {
            Err(KorepanovError::Shape { expected: "2x2", rows: self.rows, cols: self.cols })
        }
    }

    /// Exact evaluation of every entry.
    pub fn eval_rational(&self, at: &HashMap<Var, BigRational>) -> Result<Vec<Vec<BigRational>>, crate::symexpr::ExprError> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).eval_rational(at)).collect())
            .collect()
    }

    /// Rows of expression strings.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl Serialize for RFMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl fmt::Debug for RFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

impl fmt::Display for RFMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_strings() {
            writeln!(f, "[ {} ]", row.join(" , "))?;
        }
        Ok(())
    }
}

/// The ζ variable attached to polygon vertex `i`, named `z{i}`.
pub fn zeta(i: usize) -> RationalFunction {
    RationalFunction::named(&format!("z{i}"))
}

/// The 2×2 matrix of the flip of quadrilateral `(i, j, k, l)`.
pub fn quad_matrix(
    zi: &RationalFunction,
    zj: &RationalFunction,
    zk: &RationalFunction,
    zl: &RationalFunction,
) -> Result<RFMatrix, KorepanovError> {
    let top = zl.sub(zj);
    if top.is_zero() {
        return Err(KorepanovError::CoincidentZeta);
    }
    let bottom = zj.sub(zl);
    let q = |num: RationalFunction, den: &RationalFunction| num.div(den).expect("nonzero denominator");
    Ok(RFMatrix::from_rows(vec![
        vec![q(zk.sub(zj), &top), q(zi.sub(zj), &top)],
        vec![q(zk.sub(zl), &bottom), q(zi.sub(zl), &bottom)],
    ]))
}

/// `quad_matrix` on the symbolic ζ's of the given vertices.
pub fn quad_matrix_for(quad: [usize; 4]) -> RFMatrix {
    let [i, j, k, l] = quad.map(zeta);
    quad_matrix(&i, &j, &k, &l).expect("distinct symbolic ζ")
}

pub fn inverse_2x2(m: &RFMatrix) -> Result<RFMatrix, KorepanovError> {
    let det = m.determinant_2x2()?;
    if det.is_zero() {
        return Err(KorepanovError::Singular);
    }
    let s = |f: &RationalFunction| f.div(&det).expect("nonzero determinant");
    Ok(RFMatrix::from_rows(vec![
        vec![s(m.get(1, 1)), s(&m.get(0, 1).neg())],
        vec![s(&m.get(1, 0).neg()), s(m.get(0, 0))],
    ]))
}

/// True iff `m` is 2×2 and both column sums equal 1, i.e. `(1,1)·Mv = (1,1)·v`.
pub fn area_map_check(m: &RFMatrix) -> bool {
    m.rows() == 2 && m.cols() == 2 && m.column_sums().iter().all(RationalFunction::is_one)
}

/// The five 3×3 factors of the matrix pentagon identity over `z1..z5`, in
/// product order: `a1345 · a1235 · a2345⁻¹ · a1245⁻¹ · a1234⁻¹`.
///
/// These are literal tables, not generated from [`quad_matrix`].
pub fn pentagon_matrices() -> [RFMatrix; 5] {
    [
        RFMatrix::from_exprs(&[
            &["1", "0", "0"],
            &["0", "(z4 - z3)/(z5 - z3)", "(z1 - z3)/(z5 - z3)"],
            &["0", "(z4 - z5)/(z3 - z5)", "(z1 - z5)/(z3 - z5)"],
        ]),
        RFMatrix::from_exprs(&[
            &["(z3 - z2)/(z5 - z2)", "(z1 - z2)/(z5 - z2)", "0"],
            &["(z3 - z5)/(z2 - z5)", "(z1 - z5)/(z2 - z5)", "0"],
            &["0", "0", "1"],
        ]),
        RFMatrix::from_exprs(&[
            &["1", "0", "0"],
            &["0", "(z5 - z2)/(z4 - z2)", "(z3 - z2)/(z4 - z2)"],
            &["0", "(z4 - z5)/(z4 - z2)", "(z4 - z3)/(z4 - z2)"],
        ]),
        RFMatrix::from_exprs(&[
            &["(z5 - z1)/(z4 - z1)", "0", "(z2 - z1)/(z4 - z1)"],
            &["0", "1", "0"],
            &["(z4 - z5)/(z4 - z1)", "0", "(z4 - z2)/(z4 - z1)"],
        ]),
        RFMatrix::from_exprs(&[
            &["(z4 - z1)/(z3 - z1)", "(z2 - z1)/(z3 - z1)", "0"],
            &["(z3 - z4)/(z3 - z1)", "(z3 - z2)/(z3 - z1)", "0"],
            &["0", "0", "1"],
        ]),
    ]
}

/// Left-to-right product of a nonempty sequence of matrices.
pub fn product(ms: &[RFMatrix]) -> Result<RFMatrix, KorepanovError> {
    let (first, rest) = ms.split_first().expect("at least one factor");
    rest.iter().try_fold(first.clone(), |acc, m| acc.mul(m))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub identity: bool,
    pub residual_entries: Vec<String>,
}

impl IdentityReport {
    pub fn of(m: &RFMatrix) -> Self {
        let residual_entries: Vec<String> = m
            .residual_from_identity()
            .into_iter()
            .map(|(i, j, r)| format!("({},{}): {}", i + 1, j + 1, r))
            .collect();
        IdentityReport { identity: residual_entries.is_empty() && m.rows() == m.cols(), residual_entries }
    }
}

/// Multiplies the five tabulated factors and compares with `I₃`.
pub fn verify_matrix_pentagon() -> IdentityReport {
    let p = product(&pentagon_matrices()).expect("3x3 factors");
    IdentityReport::of(&p)
}

/// A triangulation together with an assignment of its triangles to the
/// coordinate slots of an area vector.
///
/// Across a flip the untouched triangle keeps its slot; the two removed
/// triangles, taken in lexicographic order, hand their slots to the two new
/// triangles in lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AreaFrame {
    triangulation: Triangulation,
    slots: Vec<[usize; 3]>,
}

impl AreaFrame {
    /// Slots in the lexicographic order of the triangles.
    pub fn new(triangulation: Triangulation) -> Self {
        let slots = triangulation.triangles();
        AreaFrame { triangulation, slots }
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.triangulation
    }

    pub fn slots(&self) -> &[[usize; 3]] {
        &self.slots
    }

    fn slot_of(&self, t: [usize; 3]) -> usize {
        self.slots.iter().position(|s| *s == t).expect("triangle of the frame")
    }

    /// The matrix of `g` on this frame's area vector, and the frame after the
    /// flip. A flip from `pr` to `qs` uses the quadrilateral matrix on
    /// `(pqr, prs) -> (pqs, qrs)`; the reverse flip uses its inverse on
    /// `(pqs, qrs) -> (pqr, prs)`. The untouched slots get the identity.
    pub fn embed(&self, g: &Generator) -> Result<(RFMatrix, AreaFrame), KorepanovError> {
        let quad @ [p, q, r, s] = g.sorted();
        let (old, _) = self.triangulation.quad_flip(quad).ok_or(KorepanovError::NotApplicable(*g))?;
        let forward = old.lo() == p && old.hi() == r;
        let block = quad_matrix_for(quad);
        let (removed, added, block) = if forward {
            ([[p, q, r], [p, r, s]], [[p, q, s], [q, r, s]], block)
        } else {
            ([[p, q, s], [q, r, s]], [[p, q, r], [p, r, s]], inverse_2x2(&block)?)
        };
        let in_slots = removed.map(|t| self.slot_of(t));
        let dim = self.slots.len();
        let mut m = RFMatrix::identity(dim);
        for &slot in &in_slots {
            m.set(slot, slot, RationalFunction::zero());
        }
        for (a, &row) in in_slots.iter().enumerate() {
            for (b, &col) in in_slots.iter().enumerate() {
                m.set(row, col, block.get(a, b).clone());
            }
        }
        let mut slots = self.slots.clone();
        for (slot, tri) in in_slots.iter().zip(added) {
            slots[*slot] = tri;
        }
        let (triangulation, _) = self.triangulation.flip(&old).expect("present diagonal");
        Ok((m, AreaFrame { triangulation, slots }))
    }

    /// Matrices of each letter of a sequence of generators, threading the
    /// frame through the flips.
    pub fn embed_sequence(&self, gens: &[Generator]) -> Result<(Vec<RFMatrix>, AreaFrame), KorepanovError> {
        let mut frame = self.clone();
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            let (m, next) = frame.embed(g)?;
            out.push(m);
            frame = next;
        }
        Ok((out, frame))
    }
}

/// The 3×3 matrix of `g` on triangulation `t`, with slots in lexicographic
/// triangle order.
pub fn embed_3x3(g: &Generator, t: &Triangulation) -> Result<RFMatrix, KorepanovError> {
    if t.n() != 5 {
        return Err(KorepanovError::Shape { expected: "pentagon (3x3)", rows: t.n() - 2, cols: t.n() - 2 });
    }
    Ok(AreaFrame::new(t.clone()).embed(g)?.0)
}

/// Searches pairwise distinct small integer ζ's for a quadrilateral matrix
/// whose square is not the identity. Returns the ζ's and the evaluated square.
pub fn non_involution_witness() -> Option<([BigRational; 4], RFMatrix)> {
    let vars: Vec<Var> = (1..=4).map(|i| Var::new(&format!("z{i}")).expect("identifier")).collect();
    let m = quad_matrix_for([1, 2, 3, 4]);
    let sq = m.mul(&m).expect("2x2");
    for a in 0..4i64 {
        for b in 0..4i64 {
            for c in 0..4i64 {
                for dd in 0..4i64 {
                    let raw = [a, b, c, dd];
                    if (0..4).any(|x| (x + 1..4).any(|y| raw[x] == raw[y])) {
                        continue;
                    }
                    let vals = raw.map(|v| BigRational::from_integer(v.into()));
                    let at: HashMap<Var, BigRational> = vars.iter().cloned().zip(vals.iter().cloned()).collect();
                    let Ok(num) = sq.eval_rational(&at) else { continue };
                    let one = BigRational::one();
                    let zero = BigRational::zero();
                    let is_id = num[0][0] == one && num[1][1] == one && num[0][1] == zero && num[1][0] == zero;
                    if !is_id {
                        let substituted = RFMatrix::from_rows(
                            num.into_iter().map(|row| row.into_iter().map(RationalFunction::constant).collect()).collect(),
                        );
                        return Some((vals, substituted));
                    }
                }
            }
        }
    }
    None
}
