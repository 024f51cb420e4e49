use std::cmp::Ordering;
use std::fmt;

use super::Var;

/// A power product of variables, stored as `(variable, exponent)` pairs
/// sorted by variable with no zero exponents.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial {
    factors: Vec<(Var, u32)>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: Var) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (Var, u32)>) -> Self {
        let mut out = Monomial::one();
        for (v, e) in factors {
            out = out.mul(&Monomial::pow_of(v, e));
        }
        out
    }

    fn pow_of(v: Var, e: u32) -> Self {
        if e == 0 {
            Monomial::one()
        } else {
            Monomial { factors: vec![(v, e)] }
        }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.factors
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.factors.iter().map(|(_, e)| e).sum()
    }

    pub fn vars(&self) -> impl Iterator<Item = &Var> {
        self.factors.iter().map(|(v, _)| v)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        self.merge(other, |a, b| Some(a + b))
    }

    /// Exponent-wise minimum.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        let mut factors = Vec::new();
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() && j < other.factors.len() {
            let (va, ea) = &self.factors[i];
            let (vb, eb) = &other.factors[j];
            match va.cmp(vb) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => {
                    factors.push((va.clone(), (*ea).min(*eb)));
                    i += 1;
                    j += 1;
                }
            }
        }
        Monomial { factors }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.factors
            .iter()
            .all(|(v, e)| other.degree_in(v) >= *e)
    }

    /// `self / other`, or `None` when `other` does not divide `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        if !other.divides(self) {
            return None;
        }
        let factors = self
            .factors
            .iter()
            .filter_map(|(v, e)| {
                let rest = e - other.degree_in(v);
                (rest > 0).then(|| (v.clone(), rest))
            })
            .collect();
        Some(Monomial { factors })
    }

    /// Splits off the power of `v`: returns `(exponent of v, remaining monomial)`.
    pub fn split_var(&self, v: &Var) -> (u32, Monomial) {
        let e = self.degree_in(v);
        let factors = self.factors.iter().filter(|(w, _)| w != v).cloned().collect();
        (e, Monomial { factors })
    }

    fn merge(&self, other: &Monomial, f: impl Fn(u32, u32) -> Option<u32>) -> Monomial {
        let mut factors = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            let next = match (self.factors.get(i), other.factors.get(j)) {
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => {
                        i += 1;
                        f(*ea, 0).map(|e| (va.clone(), e))
                    }
                    Ordering::Greater => {
                        j += 1;
                        f(0, *eb).map(|e| (vb.clone(), e))
                    }
                    Ordering::Equal => {
                        i += 1;
                        j += 1;
                        f(*ea, *eb).map(|e| (va.clone(), e))
                    }
                },
                (Some((va, ea)), None) => {
                    i += 1;
                    f(*ea, 0).map(|e| (va.clone(), e))
                }
                (None, Some((vb, eb))) => {
                    j += 1;
                    f(0, *eb).map(|e| (vb.clone(), e))
                }
                (None, None) => unreachable!(),
            };
            if let Some((v, e)) = next {
                if e > 0 {
                    factors.push((v, e));
                }
            }
        }
        Monomial { factors }
    }
}

impl Ord for Monomial {
    /// Lexicographic order: the first variable (by name) where the
    /// exponents differ decides.
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        for (k, (v, e)) in self.factors.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
