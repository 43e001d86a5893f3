//! Bivariate gcd, lowest-terms fractions, and rank-one separation.

use std::collections::BTreeSet;

use super::mpoly::{ExpVec, MPoly, Var};
use super::rat::{denominator_lcm, numerator_gcd, Rat};
use super::upoly::{upoly_gcd, UPoly};
use super::AlgebraError;

/// Scales `p` to integer coefficients with content 1 and a positive leading
/// coefficient. Zero is returned unchanged.
pub fn primitive_normalize(p: &MPoly) -> MPoly {
    if p.is_zero() {
        return p.clone();
    }
    let coeffs: Vec<Rat> = p.terms().map(|(_, c)| c.clone()).collect();
    let l = Rat::from_int(denominator_lcm(&coeffs));
    let scaled: Vec<Rat> = coeffs.iter().map(|c| c * &l).collect();
    let g = Rat::from_int(numerator_gcd(&scaled));
    let mut factor = &l / &g;
    if p.leading_coeff().is_negative() {
        factor = -factor;
    }
    p.scale(&factor)
}

/// Coefficients of `p` as a polynomial in `outer`, each a univariate
/// polynomial in `inner`.
fn to_dense(p: &MPoly, outer: &Var, inner: &Var) -> Vec<UPoly> {
    let deg = p.degree_in(outer) as usize;
    let mut rows = vec![UPoly::zero(inner.clone()); deg + 1];
    for (k, coeff) in p.collect_in(outer) {
        rows[k as usize] = UPoly::from_mpoly(&coeff, inner).expect("at most two variables");
    }
    rows
}

fn from_dense(rows: &[UPoly], outer: &Var) -> MPoly {
    let mut out = MPoly::zero();
    for (k, row) in rows.iter().enumerate() {
        let shifted = row.to_mpoly().mul_monomial(&Rat::one(), &ExpVec::var(outer.clone(), k as u32));
        out = &out + &shifted;
    }
    out
}

fn trim(rows: &mut Vec<UPoly>) {
    while rows.last().is_some_and(UPoly::is_zero) {
        rows.pop();
    }
}

fn content(rows: &[UPoly]) -> Option<UPoly> {
    rows.iter()
        .filter(|r| !r.is_zero())
        .try_fold(None::<UPoly>, |acc, r| match acc {
            None => Some(Some(r.monic())),
            Some(g) => upoly_gcd(&g, r).ok().map(Some),
        })
        .flatten()
}

fn divide_rows(rows: &[UPoly], d: &UPoly) -> Vec<UPoly> {
    rows.iter().map(|r| r.div_exact(d).expect("content divides every coefficient")).collect()
}

/// Pseudo-remainder of `a` by `b` as polynomials in the outer variable.
fn pseudo_rem(a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let n = b.len() - 1;
    let lb = b[n].clone();
    let mut r: Vec<UPoly> = a.to_vec();
    trim(&mut r);
    while !r.is_empty() && r.len() > n {
        let m = r.len() - 1;
        let lr = r[m].clone();
        for c in r.iter_mut() {
            *c = c.mul(&lb);
        }
        for (j, bc) in b.iter().enumerate() {
            let t = bc.mul(&lr);
            r[m - n + j] = r[m - n + j].sub(&t);
        }
        trim(&mut r);
    }
    r
}

/// Gcd of polynomials in at most two variables, normalized to integer
/// coefficients with content 1 and positive leading coefficient.
pub fn bivariate_gcd(a: &MPoly, b: &MPoly) -> Result<MPoly, AlgebraError> {
    if a.is_zero() && b.is_zero() {
        return Err(AlgebraError::GcdUndefined);
    }
    let vars: BTreeSet<Var> = a.support_vars().union(&b.support_vars()).cloned().collect();
    if vars.len() > 2 {
        return Err(AlgebraError::TooManyVariables(vars.len()));
    }
    if a.is_zero() {
        return Ok(primitive_normalize(b));
    }
    if b.is_zero() {
        return Ok(primitive_normalize(a));
    }
    let mut it = vars.iter().rev();
    let outer = it.next().cloned().unwrap_or_else(|| Var::new("y"));
    let inner = it.next().cloned().unwrap_or_else(|| Var::new("x"));

    let da = to_dense(a, &outer, &inner);
    let db = to_dense(b, &outer, &inner);
    let ca = content(&da).expect("nonzero");
    let cb = content(&db).expect("nonzero");
    let c = upoly_gcd(&ca, &cb)?;
    let mut p = divide_rows(&da, &ca);
    let mut q = divide_rows(&db, &cb);
    if q.len() > p.len() {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_empty() {
        if q.len() == 1 {
            // q has degree 0 in the outer variable and is primitive, so it is a unit
            p = vec![UPoly::constant(inner.clone(), Rat::one())];
            break;
        }
        let r = pseudo_rem(&p, &q);
        p = q;
        q = match content(&r) {
            Some(cr) => divide_rows(&r, &cr),
            None => Vec::new(),
        };
    }
    let cp = content(&p).expect("nonzero");
    let p = divide_rows(&p, &cp);
    let g: Vec<UPoly> = p.iter().map(|row| row.mul(&c)).collect();
    Ok(primitive_normalize(&from_dense(&g, &outer)))
}

/// Cancels the gcd of `num` and `den`, then fixes the remaining scalar so
/// both parts have integer coefficients with joint content 1 and `den` has
/// a positive leading coefficient.
pub fn reduce_fraction(num: &MPoly, den: &MPoly) -> Result<(MPoly, MPoly), AlgebraError> {
    if den.is_zero() {
        return Err(AlgebraError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok((MPoly::zero(), MPoly::one()));
    }
    let g = bivariate_gcd(num, den)?;
    let n = num.div_exact(&g).expect("gcd divides numerator");
    let d = den.div_exact(&g).expect("gcd divides denominator");
    let coeffs: Vec<Rat> = n.terms().chain(d.terms()).map(|(_, c)| c.clone()).collect();
    let l = Rat::from_int(denominator_lcm(&coeffs));
    let scaled: Vec<Rat> = coeffs.iter().map(|c| c * &l).collect();
    let mut factor = &l / &Rat::from_int(numerator_gcd(&scaled));
    if d.leading_coeff().is_negative() {
        factor = -factor;
    }
    Ok((n.scale(&factor), d.scale(&factor)))
}

/// Splits `f = g(x) * h(y)` with `g` monic when the coefficient matrix of
/// `f` has rank one; `None` otherwise (including for `f = 0`).
pub fn rank1_separate(f: &MPoly, x: &Var, y: &Var) -> Result<Option<(UPoly, UPoly)>, AlgebraError> {
    let extra = f.support_vars().into_iter().filter(|v| v != x && v != y).count();
    if extra > 0 {
        return Err(AlgebraError::TooManyVariables(extra + 2));
    }
    if f.is_zero() {
        return Ok(None);
    }
    let rows = to_dense(f, x, y);
    let pivot = rows.last().expect("nonzero").clone();
    let lp = pivot.leading_coeff();
    let mut g = Vec::with_capacity(rows.len());
    for row in &rows {
        let lambda = &row.leading_coeff() / &lp;
        if row.sub(&pivot.scale(&lambda)).is_zero() {
            g.push(lambda);
        } else {
            return Ok(None);
        }
    }
    Ok(Some((UPoly::new(x.clone(), g), pivot)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_example_shared_factor() {
        let g = bivariate_gcd(&p("y*(2*x*y+1)"), &p("x*(2*x*y+1)")).unwrap();
        assert_eq!(g, p("2*x*y + 1"));
        // division oracle: the cofactors are exact
        assert_eq!(p("y*(2*x*y+1)").div_exact(&g), Some(p("y")));
        assert_eq!(p("x*(2*x*y+1)").div_exact(&g), Some(p("x")));
    }

    #[test]
    fn gcd_edge_cases() {
        assert_eq!(bivariate_gcd(&MPoly::zero(), &MPoly::zero()), Err(AlgebraError::GcdUndefined));
        assert_eq!(bivariate_gcd(&p("x"), &p("y")).unwrap(), MPoly::one());
        assert_eq!(bivariate_gcd(&p("2*x^2-2"), &p("3*x-3")).unwrap(), p("x-1"));
        assert_eq!(bivariate_gcd(&p("(x+y)^2*(x-y)"), &p("(x+y)*(x-y)^3")).unwrap(), p("x^2-y^2"));
        assert_eq!(bivariate_gcd(&MPoly::zero(), &p("-2*x*y")).unwrap(), p("x*y"));
        assert!(matches!(bivariate_gcd(&p("x"), &p("y*z")), Err(AlgebraError::TooManyVariables(3))));
    }

    #[test]
    fn reduce_fraction_examples() {
        assert_eq!(reduce_fraction(&p("2*x"), &p("2*y")).unwrap(), (p("x"), p("y")));
        assert_eq!(reduce_fraction(&p("y*(2*x*y+1)"), &p("x*(2*x*y+1)")).unwrap(), (p("y"), p("x")));
        assert_eq!(reduce_fraction(&p("2*x"), &p("3*y^2")).unwrap(), (p("2*x"), p("3*y^2")));
        assert_eq!(reduce_fraction(&p("x"), &MPoly::zero()), Err(AlgebraError::ZeroDenominator));
        assert_eq!(reduce_fraction(&p("1/2"), &p("-3")).unwrap(), (p("-1"), p("6")));
    }

    #[test]
    fn rank1_examples() {
        let (x, y) = (Var::new("x"), Var::new("y"));
        let (g, h) = rank1_separate(&p("x*y+x+y+1"), &x, &y).unwrap().unwrap();
        assert_eq!((g.to_mpoly(), h.to_mpoly()), (p("x+1"), p("y+1")));
        assert_eq!(rank1_separate(&p("x+y"), &x, &y).unwrap(), None);
        let (g, h) = rank1_separate(&p("x^2*y - x^2 + 2*x*y - 2*x"), &x, &y).unwrap().unwrap();
        assert_eq!((g.to_mpoly(), h.to_mpoly()), (p("x^2+2*x"), p("y-1")));
        assert_eq!(&g.to_mpoly() * &h.to_mpoly(), p("(x^2+2*x)*(y-1)"));
        let (g, h) = rank1_separate(&p("6*x^2"), &x, &y).unwrap().unwrap();
        assert_eq!((g.to_mpoly(), h.to_mpoly()), (p("x^2"), p("6")));
    }
}
