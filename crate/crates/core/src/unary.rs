//! Unary reducts: iterates, the reflection of a quadratic, the definable
//! unary maps of a single polynomial and interdefinability of two of them.

use std::fmt;

use num_traits::One;
use serde::Serialize;

use crate::algebra::{Rat, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum UnaryError {
    #[error("inverse not polynomial: negative iterate of a degree {0} polynomial")]
    InverseNotPolynomial(usize),
    #[error("reflection needs a degree 2 polynomial, got degree {0}")]
    NotQuadratic(usize),
}

/// `p` composed with itself `n` times; negative `n` iterates the inverse of a
/// degree-1 polynomial.
pub fn iterate(p: &UPoly, n: i64) -> Result<UPoly, UnaryError> {
    let base = if n < 0 {
        if p.degree() != 1 {
            return Err(UnaryError::InverseNotPolynomial(p.degree()));
        }
        linear_inverse(p)
    } else {
        p.clone()
    };
    let mut acc = UPoly::identity(p.var().clone());
    let mut sq = base;
    let mut k = n.unsigned_abs();
    // composition is associative and powers of one map commute
    while k > 0 {
        if k & 1 == 1 {
            acc = acc.compose(&sq);
        }
        k >>= 1;
        if k > 0 {
            sq = sq.compose(&sq);
        }
    }
    Ok(acc)
}

fn linear_inverse(p: &UPoly) -> UPoly {
    let a = p.coeff(1);
    let b = p.coeff(0);
    let inv = a.recip().expect("degree one");
    UPoly::new(p.var().clone(), vec![-(&b * &inv), inv])
}

/// `r(x) = -b/a - x` for `p = a x^2 + b x + c`; `p(r(x)) = p(x)`.
pub fn reflection(p: &UPoly) -> Result<UPoly, UnaryError> {
    if p.degree() != 2 {
        return Err(UnaryError::NotQuadratic(p.degree()));
    }
    let axis = -(&p.coeff(1) / &p.coeff(2));
    let r = UPoly::new(p.var().clone(), vec![axis, -Rat::one()]);
    assert_eq!(p.compose(&r), *p, "reflection must fix p");
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCase {
    Constant,
    Degree1,
    Degree2,
    DegreeGe3,
}

impl FamilyCase {
    pub fn of(p: &UPoly) -> FamilyCase {
        match p.degree() {
            0 => FamilyCase::Constant,
            1 => FamilyCase::Degree1,
            2 => FamilyCase::Degree2,
            _ => FamilyCase::DegreeGe3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefinableFamily {
    pub case: FamilyCase,
    pub members: Vec<UPoly>,
    /// Every constant map is definable; they are not listed.
    pub includes_all_constants: bool,
}

/// Lists the nonconstant definable unary maps of `p` up to `degree_bound`.
///
/// For degree-1 `p` every iterate has degree 1, so the bound limits the
/// iterate index instead: `n` ranges over `-bound..=bound`.
pub fn definable_functions(p: &UPoly, degree_bound: u32) -> DefinableFamily {
    let case = FamilyCase::of(p);
    let id = UPoly::identity(p.var().clone());
    let bound = degree_bound as usize;
    let mut members: Vec<UPoly> = Vec::new();
    let mut push = |q: UPoly| {
        if !members.contains(&q) {
            members.push(q);
        }
    };
    match case {
        FamilyCase::Constant => push(id),
        FamilyCase::Degree1 => {
            let b = degree_bound as i64;
            for n in -b..=b {
                push(iterate(p, n).expect("degree one"));
            }
        }
        FamilyCase::Degree2 | FamilyCase::DegreeGe3 => {
            let r = (case == FamilyCase::Degree2).then(|| reflection(p).expect("degree two"));
            let mut it = id;
            while it.degree() <= bound {
                if let Some(r) = &r {
                    let reflected = r.compose(&it);
                    push(it.clone());
                    push(reflected);
                } else {
                    push(it.clone());
                }
                it = p.compose(&it);
            }
        }
    }
    DefinableFamily { case, members, includes_all_constants: true }
}

/// How `q` arises from `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnaryWitness {
    Constant,
    Iterate { n: i64 },
    ReflectedIterate { n: u32 },
}

impl fmt::Display for UnaryWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnaryWitness::Constant => f.write_str("constant map"),
            UnaryWitness::Iterate { n } => write!(f, "P^{n}"),
            UnaryWitness::ReflectedIterate { n } => write!(f, "r o P^{n}"),
        }
    }
}

/// Finds how `q` is definable from `p`, or `None` if it is not.
pub fn definability_witness(q: &UPoly, p: &UPoly) -> Option<UnaryWitness> {
    let q = q.with_var(p.var().clone());
    if q.is_constant() {
        return Some(UnaryWitness::Constant);
    }
    let id = UPoly::identity(p.var().clone());
    match p.degree() {
        0 => (q == id).then_some(UnaryWitness::Iterate { n: 0 }),
        1 => linear_iterate_index(&q, p).map(|n| UnaryWitness::Iterate { n }),
        d => {
            // deg P^n = d^n, so only one n can match
            let mut n = 0u32;
            let mut deg = 1usize;
            while deg < q.degree() {
                deg = deg.checked_mul(d)?;
                n += 1;
            }
            if deg != q.degree() {
                return None;
            }
            let it = iterate(p, n as i64).expect("nonnegative");
            if it == q {
                return Some(UnaryWitness::Iterate { n: n as i64 });
            }
            if d == 2 && reflection(p).expect("degree two").compose(&it) == q {
                return Some(UnaryWitness::ReflectedIterate { n });
            }
            None
        }
    }
}

/// `n` with `p^n = q` for degree-1 `p` and `q`.
fn linear_iterate_index(q: &UPoly, p: &UPoly) -> Option<i64> {
    if q.degree() != 1 {
        return None;
    }
    let a = p.coeff(1);
    let b = p.coeff(0);
    let id = UPoly::identity(p.var().clone());
    if a.is_one() {
        if b.is_zero() {
            return (*q == id).then_some(0);
        }
        // p^n = x + n b
        if !q.coeff(1).is_one() {
            return None;
        }
        let n = &q.coeff(0) / &b;
        return n.to_i64();
    }
    if a == -Rat::one() {
        // p is an involution
        return if *q == id {
            Some(0)
        } else if q == p {
            Some(1)
        } else {
            None
        };
    }
    // |a| != 1: a^n = a_q has at most one solution and height(a^n) = height(a)^|n|
    let target = q.coeff(1);
    let ha = a.height();
    let ht = target.height();
    let mut k: u32 = 0;
    let mut h = num_bigint::BigInt::one();
    while h <= ht {
        for n in [k as i64, -(k as i64)] {
            if a.powi(n).as_ref() == Some(&target) {
                let it = iterate(p, n).expect("degree one");
                return (it == *q).then_some(n);
            }
        }
        h *= &ha;
        k += 1;
    }
    None
}

/// True iff `q` is definable from `(C; p)`.
pub fn is_definable_from(q: &UPoly, p: &UPoly) -> bool {
    definability_witness(q, p).is_some()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnaryInterdefinability {
    pub interdefinable: bool,
    pub q_from_p: Option<UnaryWitness>,
    pub p_from_q: Option<UnaryWitness>,
    /// Verdict of the two-clause criterion: both among identity and
    /// constants, or mutually inverse linear maps.
    pub two_clause_verdict: bool,
    /// Set when the two-clause criterion disagrees with the definable lists.
    pub discrepancy: bool,
    pub explanation: String,
}

fn is_identity_or_constant(p: &UPoly) -> bool {
    p.is_constant() || *p == UPoly::identity(p.var().clone())
}

/// Decides interdefinability of `(C; p)` and `(C; q)` from the definable
/// lists, and reports whether the two-clause criterion agrees.
pub fn interdefinable_unary(p: &UPoly, q: &UPoly) -> UnaryInterdefinability {
    let q = q.with_var(p.var().clone());
    let q_from_p = definability_witness(&q, p);
    let p_from_q = definability_witness(p, &q);
    let interdefinable = q_from_p.is_some() && p_from_q.is_some();
    let id = UPoly::identity(p.var().clone());
    let two_clause_verdict = (is_identity_or_constant(p) && is_identity_or_constant(&q))
        || (p.degree() == 1 && q.degree() == 1 && p.compose(&q) == id);
    let discrepancy = two_clause_verdict != interdefinable;
    let mut explanation = match (&q_from_p, &p_from_q) {
        (Some(a), Some(b)) => format!("Q = {a} and P = {b}, with Q viewed as an iterate of P and vice versa"),
        (None, _) => format!("{q} is not definable from {p}"),
        (_, None) => format!("{p} is not definable from {q}"),
    };
    if discrepancy {
        explanation.push_str(&format!(
            "; the two-clause criterion says {}",
            if two_clause_verdict { "interdefinable" } else { "not interdefinable" }
        ));
    }
    UnaryInterdefinability { interdefinable, q_from_p, p_from_q, two_clause_verdict, discrepancy, explanation }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(c: &[i64]) -> UPoly {
        UPoly::from_ints("x", c)
    }

    fn ur(c: &[Rat]) -> UPoly {
        UPoly::new(crate::algebra::Var::new("x"), c.to_vec())
    }

    #[test]
    fn iterate_examples() {
        assert_eq!(iterate(&u(&[0, 0, 1]), 2).unwrap(), u(&[0, 0, 0, 0, 1]));
        assert_eq!(iterate(&u(&[1, 2]), -1).unwrap(), ur(&[Rat::new(-1, 2), Rat::new(1, 2)]));
        assert_eq!(iterate(&u(&[3, 1]), 4).unwrap(), u(&[12, 1]));
        assert_eq!(iterate(&u(&[5, 0, 1]), 0).unwrap(), u(&[0, 1]));
        assert_eq!(iterate(&u(&[0, 0, 1]), -1), Err(UnaryError::InverseNotPolynomial(2)));
        // iterate by repeated composition
        let p = u(&[1, -1, 2]);
        let mut acc = u(&[0, 1]);
        for _ in 0..3 {
            acc = p.compose(&acc);
        }
        assert_eq!(iterate(&p, 3).unwrap(), acc);
    }

    #[test]
    fn reflection_examples() {
        assert_eq!(reflection(&u(&[0, 2, 1])).unwrap(), u(&[-2, -1]));
        assert_eq!(reflection(&u(&[0, 0, 1])).unwrap(), u(&[0, -1]));
        let p = u(&[1, -4, 2]);
        let r = reflection(&p).unwrap();
        assert_eq!(r, u(&[2, -1]));
        assert_eq!(p.compose(&r), p);
        assert_eq!(reflection(&u(&[0, 0, 0, 1])), Err(UnaryError::NotQuadratic(3)));
    }

    #[test]
    fn definable_family_of_quadratic() {
        let fam = definable_functions(&u(&[1, 0, 1]), 5);
        assert_eq!(fam.case, FamilyCase::Degree2);
        // (x^2+1)^2 + 1 = x^4 + 2x^2 + 2
        assert_eq!(
            fam.members,
            vec![u(&[0, 1]), u(&[0, -1]), u(&[1, 0, 1]), u(&[-1, 0, -1]), u(&[2, 0, 2, 0, 1]), u(&[-2, 0, -2, 0, -1])]
        );
        assert!(fam.includes_all_constants);
    }

    #[test]
    fn definable_family_other_cases() {
        let fam = definable_functions(&u(&[1, 1]), 1);
        assert_eq!(fam.members, vec![u(&[-1, 1]), u(&[0, 1]), u(&[1, 1])]);
        let fam = definable_functions(&u(&[0, 0, 0, 1]), 9);
        assert_eq!(fam.members, vec![u(&[0, 1]), u(&[0, 0, 0, 1]), u(&[0, 0, 0, 0, 0, 0, 0, 0, 0, 1])]);
        assert_eq!(definable_functions(&u(&[4]), 3).members, vec![u(&[0, 1])]);
        assert_eq!(definable_functions(&u(&[3, -1]), 4).members, vec![u(&[0, 1]), u(&[3, -1])]);
        assert_eq!(definable_functions(&u(&[0, 1]), 4).members, vec![u(&[0, 1])]);
    }

    #[test]
    fn definability_examples() {
        assert!(is_definable_from(&u(&[0, 0, 0, 0, 1]), &u(&[0, 0, 1])));
        assert!(!is_definable_from(&u(&[0, 0, 1]), &u(&[0, 0, 0, 0, 1])));
        assert_eq!(
            definability_witness(&u(&[-1, 0, -1]), &u(&[1, 0, 1])),
            Some(UnaryWitness::ReflectedIterate { n: 1 })
        );
        assert!(is_definable_from(&u(&[7]), &u(&[0, 0, 0, 1])));
        assert_eq!(definability_witness(&u(&[7, 1]), &u(&[1, 1])), Some(UnaryWitness::Iterate { n: 7 }));
        assert_eq!(definability_witness(&u(&[-6, 1]), &u(&[2, 1])), Some(UnaryWitness::Iterate { n: -3 }));
        assert!(!is_definable_from(&u(&[1, 1]), &u(&[2, 1])));
        // inverse of 2x+1 is (x-1)/2, applied three times gives (x-7)/8
        assert_eq!(
            definability_witness(&ur(&[Rat::new(-7, 8), Rat::new(1, 8)]), &u(&[1, 2])),
            Some(UnaryWitness::Iterate { n: -3 })
        );
        assert!(!is_definable_from(&u(&[0, 8]), &u(&[1, 2])));
        assert!(!is_definable_from(&u(&[0, 3]), &u(&[0, 2])));
    }

    #[test]
    fn interdefinability_examples() {
        let r = interdefinable_unary(&u(&[1, 2]), &ur(&[Rat::new(-1, 2), Rat::new(1, 2)]));
        assert!(r.interdefinable && r.two_clause_verdict && !r.discrepancy);
        let r = interdefinable_unary(&u(&[0, 0, 1]), &u(&[0, 0, 0, 1]));
        assert!(!r.interdefinable && !r.discrepancy);
        let r = interdefinable_unary(&u(&[0, 0, 1]), &u(&[0, 0, -1]));
        assert!(r.interdefinable && r.discrepancy);
        let r = interdefinable_unary(&u(&[3]), &u(&[0, 1]));
        assert!(r.interdefinable && !r.discrepancy);
        let r = interdefinable_unary(&u(&[1, 0, 1]), &u(&[1, 0, 1]));
        assert!(r.interdefinable && r.discrepancy);
    }
}
