//! Multivariate polynomial gcd over the rationals.
//!
//! Cheap cases are handled first (constants, monomial content, one input
//! dividing the other). The general case runs a primitive polynomial
//! remainder sequence in a main variable, with the contents computed by
//! recursing on the remaining variables.

use std::collections::BTreeMap;

use num_rational::BigRational;

use super::Polynomial;

/// Greatest common divisor, normalized to coprime integer coefficients and a
/// positive leading coefficient. `gcd(0, 0) = 0`.
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let g = gcd_inner(a, b);
    debug_assert!(a.div_exact(&g).is_some() || g.is_zero(), "gcd does not divide {a:?}");
    debug_assert!(b.div_exact(&g).is_some() || g.is_zero(), "gcd does not divide {b:?}");
    g
}

fn gcd_inner(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.primitive();
    }
    if b.is_zero() {
        return a.primitive();
    }
    if a.is_constant() || b.is_constant() {
        return Polynomial::one();
    }

    let ma = a.monomial_content();
    let mb = b.monomial_content();
    let mono = Polynomial::term(ma.gcd(&mb), BigRational::from_integer(1.into()));
    let a = strip_monomial(a, &ma);
    let b = strip_monomial(b, &mb);
    if a.is_constant() || b.is_constant() {
        return mono;
    }

    let a = a.primitive();
    let b = b.primitive();
    let core = if a == b {
        a
    } else if b.num_terms() <= a.num_terms() && a.div_exact(&b).is_some() {
        b
    } else if a.num_terms() <= b.num_terms() && b.div_exact(&a).is_some() {
        a
    } else {
        prs_gcd(&a, &b)
    };
    (&core * &mono).primitive()
}

fn strip_monomial(p: &Polynomial, m: &super::Monomial) -> Polynomial {
    if m.is_one() {
        p.clone()
    } else {
        p.div_exact(&Polynomial::term(m.clone(), BigRational::from_integer(1.into())))
            .expect("monomial content divides")
    }
}

/// Gcd of nonconstant primitive polynomials via a primitive remainder sequence.
fn prs_gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
    let va = a.vars();
    let vb = b.vars();
    // Prefer a variable both share; otherwise the gcd lives in the content.
    let Some(x) = va.intersection(&vb).next().cloned() else {
        return Polynomial::one();
    };

    let ua = a.to_univariate(&x);
    let ub = b.to_univariate(&x);
    let ca = content_of(&ua);
    let cb = content_of(&ub);
    let content = gcd(&ca, &cb);

    let mut p = divide_coeffs(&ua, &ca);
    let mut q = divide_coeffs(&ub, &cb);
    if degree(&p) < degree(&q) {
        std::mem::swap(&mut p, &mut q);
    }
    loop {
        if degree(&q) == 0 {
            // q is primitive in x and free of x, hence a unit.
            return content;
        }
        let r = pseudo_remainder(&p, &q);
        if r.is_empty() {
            let g = Polynomial::from_univariate(&x, &q);
            return (&g * &content).primitive();
        }
        let cr = content_of(&r);
        p = q;
        q = divide_coeffs(&r, &cr);
    }
}

type Univariate = BTreeMap<u32, Polynomial>;

fn degree(u: &Univariate) -> u32 {
    u.keys().next_back().copied().unwrap_or(0)
}

fn content_of(u: &Univariate) -> Polynomial {
    let mut g = Polynomial::zero();
    for c in u.values() {
        g = gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn divide_coeffs(u: &Univariate, c: &Polynomial) -> Univariate {
    if c.is_one() {
        return u.clone();
    }
    u.iter()
        .map(|(e, k)| (*e, k.div_exact(c).expect("content divides every coefficient")))
        .collect()
}

fn pseudo_remainder(p: &Univariate, q: &Univariate) -> Univariate {
    let dq = degree(q);
    let lq = q[&dq].clone();
    let mut r = p.clone();
    while let Some((&dr, lr)) = r.iter().next_back() {
        if dr < dq {
            break;
        }
        let lr = lr.clone();
        let shift = dr - dq;
        let mut next: Univariate = BTreeMap::new();
        for (e, c) in &r {
            next.insert(*e, c * &lq);
        }
        for (e, c) in q {
            let slot = next.entry(e + shift).or_insert_with(Polynomial::zero);
            *slot = &*slot - &(c * &lr);
        }
        next.retain(|_, c| !c.is_zero());
        r = next;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symexpr::parse_expr;

    fn poly(s: &str) -> Polynomial {
        let f = parse_expr(s).unwrap();
        assert!(f.denominator().is_one());
        f.numerator().clone()
    }

    #[test]
    fn gcd_of_products_recovers_common_factor() {
        let g = poly("x*y + z - 3");
        let a = &g * &poly("x^2 + y");
        let b = &g * &poly("x - y*z + 1");
        assert_eq!(gcd(&a, &b), g);
    }

    #[test]
    fn coprime_inputs() {
        assert!(gcd(&poly("a + b"), &poly("a - b")).is_one());
        assert!(gcd(&poly("x^2 + 1"), &poly("x + 1")).is_one());
    }

    #[test]
    fn monomial_and_content_parts() {
        let a = poly("6*a^2*b*(c + d)");
        let b = poly("4*a*b^3*(c + d)*(c - d)");
        assert_eq!(gcd(&a, &b), poly("a*b*c + a*b*d"));
    }

    #[test]
    fn zero_cases() {
        assert!(gcd(&Polynomial::zero(), &Polynomial::zero()).is_zero());
        assert_eq!(gcd(&Polynomial::zero(), &poly("-2*x - 4")), poly("x + 2"));
    }

    #[test]
    fn gcd_needing_recursion_in_content() {
        // common factor (y+1) sits in the x-content of both
        let a = poly("(y + 1)*(x^2 + y)*(x + 2)");
        let b = poly("(y + 1)*(x + 2)*(x*y - 1)");
        assert_eq!(gcd(&a, &b), poly("(y + 1)*(x + 2)"));
    }
}
