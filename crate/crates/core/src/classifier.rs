//! Classification of polynomial collections into the four reduct cases,
//! with twisted-monomial detection.
//!
//! A polynomial `p` in variables `x_1..x_n` is a monomial twisted by `r`
//! when `p - r = c * prod (x_i - r)^{e_i}`. Shifting every variable by a fresh
//! symbol `s` turns this into a statement about `p(x + s) - s`: the twist
//! centers are exactly the common roots in `s` of every coefficient except
//! the one on the top monomial `prod x_i^{deg_{x_i} p}`. Those common roots
//! are the roots of a single gcd, so no factorization is required.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::algebra::{upoly_gcd, AlgebraError, ExpVec, MPoly, Rat, UPoly, Var};
use crate::unary::{self, UnaryInterdefinability};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClassifyError {
    #[error("constant polynomial; classify at collection level")]
    ConstantPolynomial,
    #[error("empty collection")]
    EmptyCollection,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Rational and algebraic description of a set of candidate centers: the
/// roots of a squarefree polynomial in `s`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RootDescriptor {
    pub witness_poly: UPoly,
    pub rational_roots: Vec<Rat>,
}

impl RootDescriptor {
    /// Builds the descriptor of the roots of `g` (which must be nonconstant).
    pub fn from_poly(g: &UPoly) -> Result<RootDescriptor, AlgebraError> {
        let witness_poly = g.squarefree_part()?.primitive();
        let rational_roots = witness_poly.rational_roots()?;
        Ok(RootDescriptor { witness_poly, rational_roots })
    }

    /// True when every root of the witness polynomial is rational.
    pub fn is_fully_rational(&self) -> bool {
        self.rational_roots.len() == self.witness_poly.degree()
    }

    /// The center when it is unique and rational.
    pub fn unique_rational(&self) -> Option<&Rat> {
        (self.witness_poly.degree() == 1).then(|| &self.rational_roots[0])
    }
}

/// Admissible twist centers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CenterSet {
    /// Every `r` works (the identity `x`); serialized with witness `0`.
    All,
    Roots(RootDescriptor),
}

impl fmt::Display for CenterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CenterSet::All => f.write_str("every r"),
            CenterSet::Roots(d) => match d.unique_rational() {
                Some(r) => write!(f, "r = {r}"),
                None => write!(f, "roots of {}", d.witness_poly),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Center {
    Rational(Rat),
    Algebraic(RootDescriptor),
}

/// `p = c * prod (x_i - center)^{e_i} + center`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct TwistCertificate {
    pub center: Center,
    pub base_constant: Rat,
    #[serde(serialize_with = "serialize_expvec")]
    pub exponents: ExpVec,
}

fn serialize_expvec<S: serde::Serializer>(e: &ExpVec, s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(None)?;
    for (v, k) in e.iter() {
        map.serialize_entry(v.as_str(), &k)?;
    }
    map.end()
}

impl TwistCertificate {
    /// Re-expands the certificate for a rational center.
    pub fn expand(&self) -> Option<MPoly> {
        let Center::Rational(r) = &self.center else {
            return None;
        };
        let rc = MPoly::constant(r.clone());
        let mut out = MPoly::constant(self.base_constant.clone());
        for (v, k) in self.exponents.iter() {
            out = &out * &(&MPoly::from_var(v) - &rc).pow(k);
        }
        Some(&out + &rc)
    }

    /// Checks the certificate against `p`. Algebraic centers are checked
    /// modulo their witness polynomial.
    pub fn verify(&self, p: &MPoly) -> bool {
        match &self.center {
            Center::Rational(_) => self.expand().as_ref() == Some(p),
            Center::Algebraic(desc) => {
                let s = fresh_var(p, "s");
                let sp = MPoly::from_var(&s);
                let mut model = MPoly::constant(self.base_constant.clone());
                for (v, k) in self.exponents.iter() {
                    model = &model * &(&MPoly::from_var(v) - &sp).pow(k);
                }
                let diff = &(&model + &sp) - p;
                let g = desc.witness_poly.with_var(s.clone());
                diff.collect_monomials_outside(&s)
                    .values()
                    .all(|coeff| UPoly::from_mpoly(coeff, &s).ok().and_then(|c| c.rem(&g)).is_some_and(|r| r.is_zero()))
            }
        }
    }
}

/// Result of twist detection on a nonconstant polynomial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwistAnalysis {
    pub centers: CenterSet,
    pub certificates: Vec<TwistCertificate>,
}

impl MPoly {
    /// Groups terms by their monomial in every variable except `s`, giving
    /// the coefficient of each group as a polynomial in `s`.
    pub(crate) fn collect_monomials_outside(&self, s: &Var) -> BTreeMap<ExpVec, MPoly> {
        let mut out: BTreeMap<ExpVec, MPoly> = BTreeMap::new();
        for (e, c) in self.terms() {
            let (rest, k) = e.split_off(s);
            out.entry(rest).or_default().add_term(ExpVec::var(s.clone(), k), c.clone());
        }
        out
    }
}

/// A variable name not used by `p`, starting from `base`.
pub(crate) fn fresh_var(p: &MPoly, base: &str) -> Var {
    let used = p.support_vars();
    let mut name = base.to_string();
    let mut k = 0;
    while used.contains(&Var::new(&name)) {
        k += 1;
        name = format!("{base}{k}");
    }
    Var::new(&name)
}

pub fn is_unary(p: &MPoly) -> bool {
    p.support_vars().len() <= 1
}

pub fn is_linear(p: &MPoly) -> bool {
    p.total_degree() <= 1
}

/// Top monomial `prod x_i^{deg_{x_i} p}`.
fn top_monomial(p: &MPoly) -> ExpVec {
    ExpVec::from_pairs(p.support_vars().into_iter().map(|v| {
        let d = p.degree_in(&v);
        (v, d)
    }))
}

/// Finds every `r` for which `p` is a monomial twisted by `r`.
///
/// Returns `None` when no center exists. The witness polynomial of the
/// returned descriptor is squarefree and primitive in the variable `s`.
pub fn twist_candidates(p: &MPoly) -> Result<Option<TwistAnalysis>, ClassifyError> {
    if p.is_constant() {
        return Err(ClassifyError::ConstantPolynomial);
    }
    let s = fresh_var(p, "s");
    let sp = MPoly::from_var(&s);
    let shift: BTreeMap<Var, MPoly> = p
        .support_vars()
        .into_iter()
        .map(|v| {
            let shifted = &MPoly::from_var(&v) + &sp;
            (v, shifted)
        })
        .collect();
    let shifted = &p.substitute_all(&shift) - &sp;
    let top = top_monomial(p);
    let groups = shifted.collect_monomials_outside(&s);
    let base_constant = match groups.get(&top).and_then(MPoly::as_constant) {
        Some(c) if !c.is_zero() => c,
        _ => return Ok(None),
    };

    let mut g: Option<UPoly> = None;
    for (mono, coeff) in &groups {
        if *mono == top {
            continue;
        }
        let c = UPoly::from_mpoly(coeff, &s)?;
        g = Some(match g {
            None => c.monic(),
            Some(acc) => upoly_gcd(&acc, &c)?,
        });
    }
    let centers = match g {
        None => CenterSet::All,
        Some(g) if g.is_constant() => return Ok(None),
        Some(g) => CenterSet::Roots(RootDescriptor::from_poly(&g)?),
    };
    let certificates = match &centers {
        CenterSet::All => Vec::new(),
        CenterSet::Roots(desc) => {
            let mut certs: Vec<TwistCertificate> = desc
                .rational_roots
                .iter()
                .map(|r| TwistCertificate {
                    center: Center::Rational(r.clone()),
                    base_constant: base_constant.clone(),
                    exponents: top.clone(),
                })
                .collect();
            if !desc.is_fully_rational() {
                certs.push(TwistCertificate {
                    center: Center::Algebraic(desc.clone()),
                    base_constant: base_constant.clone(),
                    exponents: top.clone(),
                });
            }
            certs
        }
    };
    debug_assert!(certificates.iter().all(|c| c.verify(p)));
    Ok(Some(TwistAnalysis { centers, certificates }))
}

/// The centers constraining each member: `None` if some member is not a
/// twisted monomial at all.
fn member_centers(p: &MPoly) -> Result<Option<CenterSet>, ClassifyError> {
    if let Some(c) = p.as_constant() {
        // the constant c is the twisted monomial with a = r = c
        let g = UPoly::new(Var::new("s"), vec![-c, Rat::one()]);
        return Ok(Some(CenterSet::Roots(RootDescriptor::from_poly(&g)?)));
    }
    Ok(twist_candidates(p)?.map(|t| t.centers))
}

fn intersect(a: CenterSet, b: CenterSet) -> Result<Option<CenterSet>, ClassifyError> {
    Ok(match (a, b) {
        (CenterSet::All, other) | (other, CenterSet::All) => Some(other),
        (CenterSet::Roots(x), CenterSet::Roots(y)) => {
            let g = upoly_gcd(&x.witness_poly, &y.witness_poly.with_var(x.witness_poly.var().clone()))?;
            if g.is_constant() {
                None
            } else {
                Some(CenterSet::Roots(RootDescriptor::from_poly(&g)?))
            }
        }
    })
}

/// Common twist centers of a non-empty collection.
pub fn common_twist(ps: &[MPoly]) -> Result<Option<CenterSet>, ClassifyError> {
    if ps.is_empty() {
        return Err(ClassifyError::EmptyCollection);
    }
    let mut acc = CenterSet::All;
    for p in ps {
        let Some(c) = member_centers(p)? else {
            return Ok(None);
        };
        match intersect(acc, c)? {
            Some(next) => acc = next,
            None => return Ok(None),
        }
    }
    Ok(Some(acc))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ReductCase {
    #[serde(rename = "I_unary")]
    Unary,
    #[serde(rename = "II_vector_space")]
    VectorSpace,
    #[serde(rename = "III_twisted_mult")]
    TwistedMultiplication,
    #[serde(rename = "IV_full_field")]
    FullField,
}

impl ReductCase {
    pub fn tag(&self) -> &'static str {
        match self {
            ReductCase::Unary => "I_unary",
            ReductCase::VectorSpace => "II_vector_space",
            ReductCase::TwistedMultiplication => "III_twisted_mult",
            ReductCase::FullField => "IV_full_field",
        }
    }
}

impl fmt::Display for ReductCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Per-polynomial evidence used by the case I and case IV reports.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PolyEvidence {
    pub poly: MPoly,
    pub num_variables: usize,
    pub unary: bool,
    pub linear: bool,
    /// Twist centers of the member alone, or `None` if it is not a twisted monomial.
    pub twist_centers: Option<CenterSet>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FullFieldReason {
    /// A member that is neither linear nor a twisted monomial.
    NeitherLinearNorTwisted { poly: MPoly },
    /// A linear member that is not a twisted monomial next to a nonlinear one.
    MixedLinearAndTwisted { linear: MPoly, nonlinear: MPoly },
    /// Every member is a twisted monomial but no center is shared.
    NoCommonCenter { polys: Vec<MPoly> },
}

impl fmt::Display for FullFieldReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FullFieldReason::NeitherLinearNorTwisted { poly } => {
                write!(f, "{poly} is neither linear nor a twisted monomial")
            }
            FullFieldReason::MixedLinearAndTwisted { linear, nonlinear } => {
                write!(f, "{linear} is linear but not twisted while {nonlinear} is not linear")
            }
            FullFieldReason::NoCommonCenter { polys } => {
                let list: Vec<String> = polys.iter().map(|p| p.to_string()).collect();
                write!(f, "no common twist center for [{}]", list.join(", "))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witnesses {
    Unary {
        evidence: Vec<PolyEvidence>,
    },
    /// Nonzero coefficients on variables; over the rationals they generate `Q`.
    VectorSpace {
        generators: Vec<Rat>,
        field: String,
    },
    TwistedMultiplication {
        centers: CenterSet,
        certificates: Vec<(MPoly, TwistCertificate)>,
    },
    FullField {
        reason: FullFieldReason,
        evidence: Vec<PolyEvidence>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassificationReport {
    pub case: ReductCase,
    pub witnesses: Witnesses,
    pub notes: Vec<String>,
}

fn evidence(p: &MPoly) -> Result<PolyEvidence, ClassifyError> {
    Ok(PolyEvidence {
        poly: p.clone(),
        num_variables: p.support_vars().len(),
        unary: is_unary(p),
        linear: is_linear(p),
        twist_centers: member_centers(p)?,
    })
}

/// Classifies a collection.
///
/// Case I iff every member involves at most one variable; otherwise case II
/// iff every member is linear; otherwise case III iff all members are
/// monomials twisted by a common center; otherwise case IV. The report does
/// not depend on the order of the input.
pub fn classify(ps: &[MPoly]) -> Result<ClassificationReport, ClassifyError> {
    if ps.is_empty() {
        return Err(ClassifyError::EmptyCollection);
    }
    let mut sorted = ps.to_vec();
    sorted.sort();
    let mut notes = Vec::new();

    if sorted.iter().all(is_unary) {
        let evidence = sorted.iter().map(evidence).collect::<Result<Vec<_>, _>>()?;
        if evidence.iter().any(|e| e.num_variables == 1)
            && evidence.iter().all(|e| e.twist_centers.is_some())
            && common_twist(&sorted)?.is_some()
        {
            notes.push(
                "every member is a unary twisted monomial with a shared center; the unary case takes precedence"
                    .to_string(),
            );
        }
        return Ok(ClassificationReport { case: ReductCase::Unary, witnesses: Witnesses::Unary { evidence }, notes });
    }

    if sorted.iter().all(is_linear) {
        let mut generators: Vec<Rat> = sorted
            .iter()
            .flat_map(|p| p.terms().filter(|(e, _)| !e.is_one()).map(|(_, c)| c.clone()).collect::<Vec<_>>())
            .collect();
        generators.sort();
        return Ok(ClassificationReport {
            case: ReductCase::VectorSpace,
            witnesses: Witnesses::VectorSpace { generators, field: "Q".to_string() },
            notes,
        });
    }

    if let Some(centers) = common_twist(&sorted)? {
        let mut certificates = Vec::new();
        if let CenterSet::Roots(desc) = &centers {
            for p in &sorted {
                for r in &desc.rational_roots {
                    certificates.push((p.clone(), certificate_at(p, r)));
                }
            }
        }
        return Ok(ClassificationReport {
            case: ReductCase::TwistedMultiplication,
            witnesses: Witnesses::TwistedMultiplication { centers, certificates },
            notes,
        });
    }

    let evidence = sorted.iter().map(evidence).collect::<Result<Vec<_>, _>>()?;
    let reason = if let Some(e) = evidence.iter().find(|e| !e.linear && e.twist_centers.is_none()) {
        FullFieldReason::NeitherLinearNorTwisted { poly: e.poly.clone() }
    } else if let Some(lin) = evidence.iter().find(|e| e.twist_centers.is_none()) {
        let nonlinear = evidence.iter().find(|e| !e.linear).expect("case II failed");
        FullFieldReason::MixedLinearAndTwisted { linear: lin.poly.clone(), nonlinear: nonlinear.poly.clone() }
    } else {
        FullFieldReason::NoCommonCenter { polys: sorted.clone() }
    };
    Ok(ClassificationReport {
        case: ReductCase::FullField,
        witnesses: Witnesses::FullField { reason, evidence },
        notes,
    })
}

/// Certificate of `p` at a known rational center.
fn certificate_at(p: &MPoly, r: &Rat) -> TwistCertificate {
    if let Some(c) = p.as_constant() {
        return TwistCertificate { center: Center::Rational(r.clone()), base_constant: c, exponents: ExpVec::one() };
    }
    let top = top_monomial(p);
    let base_constant = p.coeff(&top);
    TwistCertificate { center: Center::Rational(r.clone()), base_constant, exponents: top }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Yes,
    No,
    UndeterminedCaseI,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::UndeterminedCaseI => "undetermined_case_I",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InterdefinabilityReport {
    pub verdict: Verdict,
    pub explanation: String,
    pub case_a: ReductCase,
    pub case_b: ReductCase,
    pub unary: Option<UnaryInterdefinability>,
}

/// Decides whether two collections generate interdefinable structures.
pub fn interdefinable(a: &[MPoly], b: &[MPoly]) -> Result<InterdefinabilityReport, ClassifyError> {
    let ra = classify(a)?;
    let rb = classify(b)?;
    let (case_a, case_b) = (ra.case, rb.case);
    let mut unary_report = None;
    let (verdict, explanation) = if case_a != case_b {
        (Verdict::No, format!("different cases: {case_a} vs {case_b}"))
    } else {
        match (&ra.witnesses, &rb.witnesses) {
            (Witnesses::VectorSpace { .. }, Witnesses::VectorSpace { .. }) => (
                Verdict::Yes,
                "both are vector spaces over the field generated by their rational coefficients, Q".to_string(),
            ),
            (
                Witnesses::TwistedMultiplication { centers: ca, .. },
                Witnesses::TwistedMultiplication { centers: cb, .. },
            ) => {
                if ca == cb {
                    (Verdict::Yes, format!("same twist center: {ca}"))
                } else {
                    (Verdict::No, format!("different twist centers: {ca} vs {cb}"))
                }
            }
            (Witnesses::FullField { .. }, Witnesses::FullField { .. }) => {
                (Verdict::Yes, "both define + and *".to_string())
            }
            _ => {
                if a.len() == 1 && b.len() == 1 {
                    let x = Var::new("x");
                    let p = UPoly::from_unary_mpoly(&a[0], &x)?.with_var(x.clone());
                    let q = UPoly::from_unary_mpoly(&b[0], &x)?.with_var(x.clone());
                    let u = unary::interdefinable_unary(&p, &q);
                    let verdict = if u.interdefinable { Verdict::Yes } else { Verdict::No };
                    let explanation = u.explanation.clone();
                    unary_report = Some(u);
                    (verdict, explanation)
                } else {
                    (
                        Verdict::UndeterminedCaseI,
                        "interdefinability of unary collections is only decided for single polynomials".to_string(),
                    )
                }
            }
        }
    };
    Ok(InterdefinabilityReport { verdict, explanation, case_a, case_b, unary: unary_report })
}

/// Variables of a collection, for diagnostics.
pub fn collection_vars(ps: &[MPoly]) -> BTreeSet<Var> {
    ps.iter().flat_map(|p| p.support_vars()).collect()
}
