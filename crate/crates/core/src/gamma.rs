//! Generators `d(i,j,k,l)` and words of the group presented by flips of
//! quadrilaterals, with enumeration of its defining relations.
//!
//! Words are free sequences. The relations are checked against concrete
//! actions (see [`crate::ptolemy`] and [`crate::korepanov`]), never by
//! rewriting inside the group.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("generator indices must be distinct and positive, got {0:?}")]
    BadIndices(Vec<usize>),
    #[error("cannot parse `{0}` as a generator (expected d(i,j,k,l) or d(i,j,k,l)^-1)")]
    Parse(String),
    #[error("{kind:?} relations need n >= {min}, got {n}")]
    TooSmall { kind: RelationKind, n: usize, min: usize },
}

/// The eight index arrangements identified with `d(i,j,k,l)`, as position
/// permutations of `(i, j, k, l)`:
/// ijkl, kjil, ilkj, klij, jkli, jilk, lkji, lijk.
pub const SYMMETRY_ARRANGEMENTS: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [2, 1, 0, 3],
    [0, 3, 2, 1],
    [2, 3, 0, 1],
    [1, 2, 3, 0],
    [1, 0, 3, 2],
    [3, 2, 1, 0],
    [3, 0, 1, 2],
];

/// All eight arrangements of a quadruple.
pub fn symmetry_orbit(idx: [usize; 4]) -> Vec<[usize; 4]> {
    SYMMETRY_ARRANGEMENTS
        .iter()
        .map(|p| [idx[p[0]], idx[p[1]], idx[p[2]], idx[p[3]]])
        .collect()
}

/// A flip generator in canonical form: the lexicographically smallest of
/// the eight equivalent arrangements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Generator {
    idx: [usize; 4],
}

impl Generator {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Result<Self, GammaError> {
        let idx = [i, j, k, l];
        let distinct = idx.iter().collect::<BTreeSet<_>>().len() == 4;
        if !distinct || idx.contains(&0) {
            return Err(GammaError::BadIndices(idx.to_vec()));
        }
        let canonical = symmetry_orbit(idx).into_iter().min().expect("nonempty orbit");
        Ok(Generator { idx: canonical })
    }

    pub fn from_array(idx: [usize; 4]) -> Result<Self, GammaError> {
        Self::new(idx[0], idx[1], idx[2], idx[3])
    }

    pub fn indices(&self) -> [usize; 4] {
        self.idx
    }

    /// The vertex set, sorted ascending.
    pub fn sorted(&self) -> [usize; 4] {
        let mut s = self.idx;
        s.sort_unstable();
        s
    }

    pub fn vertex_set(&self) -> BTreeSet<usize> {
        self.idx.iter().copied().collect()
    }

    pub fn max_index(&self) -> usize {
        *self.idx.iter().max().expect("four indices")
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [i, j, k, l] = self.idx;
        write!(f, "d({i},{j},{k},{l})")
    }
}

/// Shorthand constructor for literal generators. Panics on invalid indices.
pub fn d(i: usize, j: usize, k: usize, l: usize) -> Generator {
    Generator::new(i, j, k, l).expect("valid generator indices")
}

/// True iff the index sets share fewer than three elements.
pub fn far_commute(g1: &Generator, g2: &Generator) -> bool {
    g1.vertex_set().intersection(&g2.vertex_set()).count() < 3
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inverse {
            write!(f, "{}^-1", self.generator)
        } else {
            write!(f, "{}", self.generator)
        }
    }
}

impl Serialize for Generator {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        let letter = parse_letter_str(&s).map_err(serde::de::Error::custom)?;
        if letter.inverse {
            return Err(serde::de::Error::custom("generator must not carry an exponent"));
        }
        Ok(letter.generator)
    }
}

/// Splits on whitespace outside parentheses; whitespace inside a token is
/// dropped.
fn tokens(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0usize;
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            _ => {}
        }
        if c.is_whitespace() {
            if depth == 0 && !cur.is_empty() {
                out.push(std::mem::take(&mut cur));
            }
            continue;
        }
        cur.push(c);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

fn parse_letter_str(tok: &str) -> Result<Letter, GammaError> {
    let bad = || GammaError::Parse(tok.to_string());
    let (body, inverse) = match tok.strip_suffix("^-1") {
        Some(b) => (b, true),
        None => (tok.strip_suffix("^1").unwrap_or(tok), false),
    };
    let inner = body
        .strip_prefix("d(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(bad)?;
    let nums: Vec<usize> = inner
        .split(',')
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<_, _>>()
        .map_err(|_| bad())?;
    let idx: [usize; 4] = nums.try_into().map_err(|_| bad())?;
    Ok(Letter { generator: Generator::from_array(idx)?, inverse })
}

/// A finite sequence of generators with exponents ±1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_generators(gens: impl IntoIterator<Item = Generator>) -> Self {
        Word {
            letters: gens.into_iter().map(|generator| Letter { generator, inverse: false }).collect(),
        }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> + '_ {
        self.letters.iter().map(|l| l.generator)
    }

    pub fn push(&mut self, generator: Generator, inverse: bool) {
        self.letters.push(Letter { generator, inverse });
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Formal inverse: reversed with exponents negated.
    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { generator: l.generator, inverse: !l.inverse })
                .collect(),
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = GammaError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = tokens(s).iter().map(|t| parse_letter_str(t)).collect::<Result<_, _>>()?;
        Ok(Word { letters })
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// `d(ijkl) d(ijlm) d(jklm) d(ijkm) d(iklm)`.
pub fn pentagon_word(i: usize, j: usize, k: usize, l: usize, m: usize) -> Result<Word, GammaError> {
    let all = [i, j, k, l, m];
    if all.iter().collect::<BTreeSet<_>>().len() != 5 || all.contains(&0) {
        return Err(GammaError::BadIndices(all.to_vec()));
    }
    Ok(Word::from_generators([
        Generator::new(i, j, k, l)?,
        Generator::new(i, j, l, m)?,
        Generator::new(j, k, l, m)?,
        Generator::new(i, j, k, m)?,
        Generator::new(i, k, l, m)?,
    ]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationKind {
    Involution,
    FarComm,
    Pentagon,
    Symmetry,
}

impl RelationKind {
    pub const ALL: [RelationKind; 4] = [RelationKind::Involution, RelationKind::FarComm, RelationKind::Pentagon, RelationKind::Symmetry];

    pub fn min_n(self) -> usize {
        match self {
            RelationKind::Pentagon => 5,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RelationInstance {
    /// `g^2 = 1`
    Involution(Generator),
    /// `g h = h g`
    FarComm(Generator, Generator),
    /// The five-letter pentagon word equals 1.
    Pentagon(Word),
    /// `d(arrangement) = d(canonical)`
    Symmetry { arrangement: [usize; 4], canonical: Generator },
}

impl RelationInstance {
    /// Left and right sides as words.
    pub fn sides(&self) -> (Word, Word) {
        match self {
            RelationInstance::Involution(g) => (Word::from_generators([*g, *g]), Word::empty()),
            RelationInstance::FarComm(g, h) => (Word::from_generators([*g, *h]), Word::from_generators([*h, *g])),
            RelationInstance::Pentagon(w) => (w.clone(), Word::empty()),
            RelationInstance::Symmetry { arrangement, canonical } => (
                Word::from_generators([Generator::from_array(*arrangement).expect("valid arrangement")]),
                Word::from_generators([*canonical]),
            ),
        }
    }
}

impl fmt::Display for RelationInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelationInstance::Symmetry { arrangement: [i, j, k, l], canonical } => {
                write!(f, "d({i},{j},{k},{l}) = {canonical}")
            }
            other => {
                let (lhs, rhs) = other.sides();
                let rhs = if rhs.is_empty() { "1".to_string() } else { rhs.to_string() };
                write!(f, "{lhs} = {rhs}")
            }
        }
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// The generators of convex quadrilaterals `d(p,q,r,s)`, `p<q<r<s<=n`, one
/// per 4-subset.
pub fn quad_generators(n: usize) -> Vec<Generator> {
    subsets(n, 4)
        .into_iter()
        .map(|s| Generator::new(s[0], s[1], s[2], s[3]).expect("distinct"))
        .collect()
}

/// Enumerates every instance of one relation family over indices `1..=n`.
pub fn relation_instances(n: usize, kind: RelationKind) -> Result<Vec<RelationInstance>, GammaError> {
    if n < kind.min_n() {
        return Err(GammaError::TooSmall { kind, n, min: kind.min_n() });
    }
    let gens = quad_generators(n);
    Ok(match kind {
        RelationKind::Involution => gens.into_iter().map(RelationInstance::Involution).collect(),
        RelationKind::FarComm => {
            let mut out = Vec::new();
            for (a, g) in gens.iter().enumerate() {
                for h in &gens[a + 1..] {
                    if far_commute(g, h) {
                        out.push(RelationInstance::FarComm(*g, *h));
                    }
                }
            }
            out
        }
        RelationKind::Pentagon => subsets(n, 5)
            .into_iter()
            .map(|s| RelationInstance::Pentagon(pentagon_word(s[0], s[1], s[2], s[3], s[4]).expect("distinct")))
            .collect(),
        RelationKind::Symmetry => gens
            .into_iter()
            .flat_map(|g| {
                symmetry_orbit(g.indices())
                    .into_iter()
                    .map(move |arrangement| RelationInstance::Symmetry { arrangement, canonical: g })
            })
            .collect(),
    })
}
