//! Growth experiments: witness sets of bounded-coefficient monomial
//! combinations, exact image sizes `|P(A, B)|` and fitted exponents.

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{denominator_lcm, ExpVec, MPoly, Rat, Var};

/// Largest witness set that may be materialized.
pub const MAX_SET_ELEMENTS: u64 = 1_000_000;
/// Largest number of evaluations of `P` in one image computation.
pub const MAX_EVALUATIONS: u64 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExpansionError {
    #[error("degenerate progression: {0}")]
    Degenerate(&'static str),
    #[error("empty set")]
    EmptySet,
    #[error("size guard: {what} would be {size}, limit {limit}")]
    Guard { what: &'static str, size: String, limit: u64 },
    #[error("invalid witness parameters: {0}")]
    InvalidParams(String),
    #[error("exponent needs N >= 2, got {0}")]
    SetTooSmall(u64),
    #[error("sizes must be strictly ascending")]
    NotAscending,
    #[error("polynomial must use at most two variables: {0}")]
    TooManyVariables(String),
}

pub type Result<T> = std::result::Result<T, ExpansionError>;

/// `{start, start + step, ..., start + (n-1) step}`.
pub fn ap_set(start: &Rat, step: &Rat, n: usize) -> Result<Vec<Rat>> {
    if step.is_zero() {
        return Err(ExpansionError::Degenerate("step must be nonzero"));
    }
    if n == 0 {
        return Err(ExpansionError::EmptySet);
    }
    let mut out = Vec::with_capacity(n);
    let mut cur = start.clone();
    for _ in 0..n {
        out.push(cur.clone());
        cur += step;
    }
    Ok(out)
}

/// `{start, start * ratio, ..., start * ratio^(n-1)}`.
pub fn gp_set(start: &Rat, ratio: &Rat, n: usize) -> Result<Vec<Rat>> {
    if start.is_zero() {
        return Err(ExpansionError::Degenerate("start must be nonzero"));
    }
    if ratio.is_zero() || ratio.abs().is_one() {
        return Err(ExpansionError::Degenerate("ratio must not be 0 or +-1"));
    }
    if n == 0 {
        return Err(ExpansionError::EmptySet);
    }
    let mut out = Vec::with_capacity(n);
    let mut cur = start.clone();
    for _ in 0..n {
        out.push(cur.clone());
        cur *= ratio;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "values", rename_all = "snake_case")]
pub enum Generators {
    /// Independent formal symbols.
    Formal(Vec<Var>),
    /// Integer specializations; collisions are counted, not excluded.
    Integer(Vec<i64>),
}

impl Generators {
    pub fn len(&self) -> usize {
        match self {
            Generators::Formal(v) => v.len(),
            Generators::Integer(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WitnessParams {
    pub generators: Generators,
    /// Per-variable degree cap `d`: monomials have every exponent `< d`.
    pub degree_cap: u32,
    /// Coefficients range over `0..coeff_bound`.
    pub coeff_bound: u32,
}

impl WitnessParams {
    pub fn formal(names: &[&str], degree_cap: u32, coeff_bound: u32) -> Result<WitnessParams> {
        let gens = Generators::Formal(names.iter().map(|n| Var::new(n)).collect());
        WitnessParams::new(gens, degree_cap, coeff_bound)
    }

    pub fn integer(values: &[i64], degree_cap: u32, coeff_bound: u32) -> Result<WitnessParams> {
        WitnessParams::new(Generators::Integer(values.to_vec()), degree_cap, coeff_bound)
    }

    pub fn new(generators: Generators, degree_cap: u32, coeff_bound: u32) -> Result<WitnessParams> {
        if degree_cap < 1 {
            return Err(ExpansionError::InvalidParams("degree cap must be at least 1".into()));
        }
        if coeff_bound < 2 {
            return Err(ExpansionError::InvalidParams("coeff_bound must be at least 2".into()));
        }
        if generators.is_empty() {
            return Err(ExpansionError::InvalidParams("no generators".into()));
        }
        let distinct = match &generators {
            Generators::Formal(v) => v.iter().collect::<HashSet<_>>().len() == v.len(),
            Generators::Integer(v) => {
                if v.iter().any(|&g| g < 2) {
                    return Err(ExpansionError::InvalidParams("integer generators must be >= 2".into()));
                }
                v.iter().collect::<HashSet<_>>().len() == v.len()
            }
        };
        if !distinct {
            return Err(ExpansionError::InvalidParams("generators must be distinct".into()));
        }
        Ok(WitnessParams { generators, degree_cap, coeff_bound })
    }

    pub fn with(&self, degree_cap: u32, coeff_bound: u32) -> Result<WitnessParams> {
        WitnessParams::new(self.generators.clone(), degree_cap, coeff_bound)
    }

    /// Exponent tuples of the monomials with every exponent `< degree_cap`.
    pub fn monomials(&self) -> Vec<Vec<u32>> {
        exponent_box(self.generators.len(), self.degree_cap)
    }

    /// `coeff_bound^|Q_d|`, the number of coefficient choices.
    pub fn combinations(&self) -> BigUint {
        let q = self.monomials().len() as u32;
        num_traits::pow(BigUint::from(self.coeff_bound), q as usize)
    }

    fn formal_vars(&self) -> Result<&[Var]> {
        match &self.generators {
            Generators::Formal(v) => Ok(v),
            Generators::Integer(_) => Err(ExpansionError::InvalidParams("formal mode required".into())),
        }
    }

    fn guard(&self) -> Result<u64> {
        let n = self.combinations();
        match n.to_u64() {
            Some(k) if k <= MAX_SET_ELEMENTS => Ok(k),
            _ => Err(ExpansionError::Guard { what: "witness set", size: n.to_string(), limit: MAX_SET_ELEMENTS }),
        }
    }
}

fn exponent_box(l: usize, cap: u32) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..l {
        out = out
            .into_iter()
            .flat_map(|e| {
                (0..cap).map(move |k| {
                    let mut e = e.clone();
                    e.push(k);
                    e
                })
            })
            .collect();
    }
    out
}

fn monomial_of(vars: &[Var], e: &[u32]) -> ExpVec {
    ExpVec::from_pairs(vars.iter().cloned().zip(e.iter().copied()))
}

/// Witness set with formal generators. Elements are indexed by their
/// coefficient vectors written in base `coeff_bound`.
#[derive(Debug, Clone)]
pub struct FormalWitnessSet {
    pub vars: Vec<Var>,
    pub monomials: Vec<Vec<u32>>,
    pub coeff_bound: u32,
    len: u64,
}

impl FormalWitnessSet {
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn coefficients(&self, mut index: u64) -> Vec<u32> {
        let r = self.coeff_bound as u64;
        (0..self.monomials.len())
            .map(|_| {
                let c = (index % r) as u32;
                index /= r;
                c
            })
            .collect()
    }

    pub fn element(&self, index: u64) -> MPoly {
        let coeffs = self.coefficients(index);
        MPoly::from_terms(
            self.monomials.iter().zip(coeffs).map(|(e, c)| (monomial_of(&self.vars, e), Rat::from(c as i64))),
        )
    }

    pub fn iter(&self) -> impl Iterator<Item = MPoly> + '_ {
        (0..self.len).map(|i| self.element(i))
    }
}

#[derive(Debug, Clone)]
pub enum WitnessSet {
    Formal(FormalWitnessSet),
    Integer {
        /// Distinct values, ascending.
        elements: Vec<Rat>,
        combinations: u64,
        collisions: u64,
    },
}

impl WitnessSet {
    pub fn len(&self) -> u64 {
        match self {
            WitnessSet::Formal(s) => s.len(),
            WitnessSet::Integer { elements, .. } => elements.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Builds `B = { sum_q a_q q(generators) : a_q in 0..coeff_bound }`.
pub fn witness_b(params: &WitnessParams) -> Result<WitnessSet> {
    let combos = params.guard()?;
    let monomials = params.monomials();
    match &params.generators {
        Generators::Formal(vars) => Ok(WitnessSet::Formal(FormalWitnessSet {
            vars: vars.clone(),
            monomials,
            coeff_bound: params.coeff_bound,
            len: combos,
        })),
        Generators::Integer(values) => {
            let basis: Vec<BigInt> = monomials
                .iter()
                .map(|e| values.iter().zip(e).map(|(&g, &k)| num_traits::pow(BigInt::from(g), k as usize)).product())
                .collect();
            let r = params.coeff_bound as u64;
            let mut seen: HashSet<BigInt> = HashSet::with_capacity(combos as usize);
            for mut index in 0..combos {
                let mut value = BigInt::zero();
                for b in &basis {
                    let c = index % r;
                    index /= r;
                    if c != 0 {
                        value += b * c;
                    }
                }
                seen.insert(value);
            }
            let mut elements: Vec<Rat> = seen.into_iter().map(Rat::from_int).collect();
            elements.sort();
            let collisions = combos - elements.len() as u64;
            Ok(WitnessSet::Integer { elements, combinations: combos, collisions })
        }
    }
}

/// A factor `alpha` or `beta` in `alpha * B + beta * B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Multiplier {
    One,
    /// Index into the formal generators.
    Generator(usize),
}

impl Multiplier {
    fn shift(&self, e: &[u32]) -> Vec<u32> {
        let mut e = e.to_vec();
        if let Multiplier::Generator(i) = self {
            e[*i] += 1;
        }
        e
    }

    fn check(&self, l: usize) -> Result<()> {
        match self {
            Multiplier::Generator(i) if *i >= l => {
                Err(ExpansionError::InvalidParams(format!("generator index {i} out of range")))
            }
            _ => Ok(()),
        }
    }

    fn to_mpoly(self, vars: &[Var]) -> MPoly {
        match self {
            Multiplier::One => MPoly::one(),
            Multiplier::Generator(i) => MPoly::from_var(&vars[i]),
        }
    }
}

/// Every ordered pair of generators.
pub fn generator_pairs(params: &WitnessParams) -> Vec<(Multiplier, Multiplier)> {
    let l = params.generators.len();
    (0..l).flat_map(|i| (0..l).map(move |j| (Multiplier::Generator(i), Multiplier::Generator(j)))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ContainmentRoute {
    /// Each target monomial collects at most one coefficient from each
    /// summand, so the check splits into independent per-monomial checks.
    Coordinatewise,
    /// Every pair of elements is formed and tested.
    Pairwise,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ContainmentReport {
    pub holds: bool,
    pub counterexample: Option<MPoly>,
    pub route: ContainmentRoute,
    pub checked: u64,
}

/// Membership of `p` in `B_{coeff_bound}^{degree_cap}` over `vars`.
pub fn in_witness_set(p: &MPoly, vars: &[Var], degree_cap: u32, coeff_bound: u32) -> bool {
    let bound = Rat::from(coeff_bound as i64);
    p.terms().all(|(e, c)| {
        e.vars().all(|v| vars.contains(v))
            && e.iter().all(|(_, k)| k < degree_cap)
            && c.is_integer()
            && !c.is_negative()
            && *c < bound
    })
}

/// Checks `alpha * B + beta * B` inside `B_{2 coeff_bound}^{d + 1}`.
pub fn containment_check(alpha: Multiplier, beta: Multiplier, params: &WitnessParams) -> Result<ContainmentReport> {
    containment_check_into(
        alpha,
        beta,
        params,
        params.degree_cap + 1,
        2 * params.coeff_bound,
        ContainmentRoute::Coordinatewise,
    )
}

/// Checks `alpha * B + beta * B` inside `B_{target_bound}^{target_cap}`
/// along the given route.
pub fn containment_check_into(
    alpha: Multiplier,
    beta: Multiplier,
    params: &WitnessParams,
    target_cap: u32,
    target_bound: u32,
    route: ContainmentRoute,
) -> Result<ContainmentReport> {
    let vars = params.formal_vars()?.to_vec();
    alpha.check(vars.len())?;
    beta.check(vars.len())?;
    let set = match witness_b(params)? {
        WitnessSet::Formal(s) => s,
        WitnessSet::Integer { .. } => unreachable!("formal generators"),
    };
    match route {
        ContainmentRoute::Coordinatewise => Ok(coordinatewise(alpha, beta, &set, target_cap, target_bound)),
        ContainmentRoute::Pairwise => {
            let pairs = (set.len() as u128) * (set.len() as u128);
            if pairs > MAX_SET_ELEMENTS as u128 {
                return Err(ExpansionError::Guard {
                    what: "pair enumeration",
                    size: pairs.to_string(),
                    limit: MAX_SET_ELEMENTS,
                });
            }
            let (a, b) = (alpha.to_mpoly(&vars), beta.to_mpoly(&vars));
            let elements: Vec<MPoly> = set.iter().collect();
            let mut checked = 0;
            for e1 in &elements {
                let left = &a * e1;
                for e2 in &elements {
                    let z = &left + &(&b * e2);
                    checked += 1;
                    if !in_witness_set(&z, &vars, target_cap, target_bound) {
                        return Ok(ContainmentReport { holds: false, counterexample: Some(z), route, checked });
                    }
                }
            }
            Ok(ContainmentReport { holds: true, counterexample: None, route, checked })
        }
    }
}

fn coordinatewise(
    alpha: Multiplier,
    beta: Multiplier,
    set: &FormalWitnessSet,
    target_cap: u32,
    target_bound: u32,
) -> ContainmentReport {
    let r = set.coeff_bound;
    // target monomial -> (source index under alpha, source index under beta)
    let mut sources: BTreeMap<Vec<u32>, (Option<usize>, Option<usize>)> = BTreeMap::new();
    for (i, e) in set.monomials.iter().enumerate() {
        sources.entry(alpha.shift(e)).or_default().0 = Some(i);
        sources.entry(beta.shift(e)).or_default().1 = Some(i);
    }
    let mut checked = 0;
    for (m, (sa, sb)) in &sources {
        let av: Vec<u32> = if sa.is_some() { (0..r).collect() } else { vec![0] };
        let bv: Vec<u32> = if sb.is_some() { (0..r).collect() } else { vec![0] };
        for &x in &av {
            for &y in &bv {
                checked += 1;
                let c = x + y;
                let ok = c == 0 || (m.iter().all(|&k| k < target_cap) && c < target_bound);
                if !ok {
                    let mut ca = vec![0u32; set.monomials.len()];
                    let mut cb = vec![0u32; set.monomials.len()];
                    if let Some(i) = sa {
                        ca[*i] = x;
                    }
                    if let Some(i) = sb {
                        cb[*i] = y;
                    }
                    let build = |coeffs: &[u32]| {
                        MPoly::from_terms(
                            set.monomials
                                .iter()
                                .zip(coeffs)
                                .map(|(e, &c)| (monomial_of(&set.vars, e), Rat::from(c as i64))),
                        )
                    };
                    let z = &(&alpha.to_mpoly(&set.vars) * &build(&ca)) + &(&beta.to_mpoly(&set.vars) * &build(&cb));
                    debug_assert!(!in_witness_set(&z, &set.vars, target_cap, target_bound));
                    return ContainmentReport {
                        holds: false,
                        counterexample: Some(z),
                        route: ContainmentRoute::Coordinatewise,
                        checked,
                    };
                }
            }
        }
    }
    ContainmentReport { holds: true, counterexample: None, route: ContainmentRoute::Coordinatewise, checked }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZkReport {
    pub s_size: String,
    pub z_size: String,
    /// `log|Z| / log|S|`.
    pub ratio: f64,
    /// `((d + 1) / d)^l`.
    pub limit_bound: f64,
}

/// `log|Z| / log|S|` for `S = B` and `Z` the union of `alpha S + beta S`
/// over `pairs`, with `|Z|` counted exactly.
///
/// Each `alpha S + beta S` is a box of coefficient vectors anchored at 0, so
/// the union is counted by inclusion-exclusion over intersections of boxes.
pub fn zk_ratio(params: &WitnessParams, pairs: &[(Multiplier, Multiplier)]) -> Result<ZkReport> {
    let vars = params.formal_vars()?;
    if pairs.is_empty() {
        return Err(ExpansionError::InvalidParams("no pairs".into()));
    }
    if pairs.len() > 16 {
        return Err(ExpansionError::Guard { what: "pair subsets", size: format!("2^{}", pairs.len()), limit: 1 << 16 });
    }
    let r = params.coeff_bound as u64;
    let monomials = params.monomials();
    let boxes: Vec<BTreeMap<Vec<u32>, u64>> = pairs
        .iter()
        .map(|(a, b)| {
            a.check(vars.len())?;
            b.check(vars.len())?;
            let mut upper: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
            for e in &monomials {
                *upper.entry(a.shift(e)).or_default() += r - 1;
                *upper.entry(b.shift(e)).or_default() += r - 1;
            }
            Ok(upper)
        })
        .collect::<Result<_>>()?;
    let box_size = |b: &BTreeMap<Vec<u32>, u64>| -> BigUint { b.values().map(|&u| BigUint::from(u + 1)).product() };
    let mut total = BigInt::zero();
    for mask in 1u32..(1 << boxes.len()) {
        let chosen: Vec<&BTreeMap<Vec<u32>, u64>> =
            boxes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, b)| b).collect();
        let mut inter = chosen[0].clone();
        for b in &chosen[1..] {
            inter = inter.into_iter().filter_map(|(m, u)| b.get(&m).map(|&v| (m, u.min(v)))).collect();
        }
        let size = BigInt::from(box_size(&inter));
        if mask.count_ones() % 2 == 1 {
            total += size;
        } else {
            total -= size;
        }
    }
    let z = total.to_biguint().expect("union size is positive");
    let s = params.combinations();
    let ratio = ln_big(&z) / ln_big(&s);
    let d = params.degree_cap as f64;
    let limit_bound = ((d + 1.0) / d).powi(vars.len() as i32);
    Ok(ZkReport { s_size: s.to_string(), z_size: z.to_string(), ratio, limit_bound })
}

fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().expect("finite").ln();
    }
    let shift = bits - 64;
    (n >> shift).to_f64().expect("finite").ln() + shift as f64 * std::f64::consts::LN_2
}

/// Value `odd * 2^shift` with `odd` odd, or zero as `(0, 0)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Dyadic {
    odd: i128,
    shift: u32,
}

impl Dyadic {
    const ZERO: Dyadic = Dyadic { odd: 0, shift: 0 };

    fn from_i128(v: i128) -> Dyadic {
        if v == 0 {
            return Dyadic::ZERO;
        }
        let tz = v.trailing_zeros();
        Dyadic { odd: v >> tz, shift: tz }
    }

    fn from_big(v: &BigInt) -> Option<Dyadic> {
        if v.is_zero() {
            return Some(Dyadic::ZERO);
        }
        let tz = v.trailing_zeros().expect("nonzero") as u32;
        Some(Dyadic { odd: (v >> tz).to_i128()?, shift: tz })
    }

    fn mul(self, o: Dyadic) -> Option<Dyadic> {
        if self.odd == 0 || o.odd == 0 {
            return Some(Dyadic::ZERO);
        }
        Some(Dyadic { odd: self.odd.checked_mul(o.odd)?, shift: self.shift.checked_add(o.shift)? })
    }

    fn add(self, o: Dyadic) -> Option<Dyadic> {
        if self.odd == 0 {
            return Some(o);
        }
        if o.odd == 0 {
            return Some(self);
        }
        let (lo, hi) = if self.shift <= o.shift { (self, o) } else { (o, self) };
        let diff = hi.shift - lo.shift;
        if diff >= 126 {
            return None;
        }
        let sum = lo.odd.checked_add(hi.odd.checked_mul(1i128 << diff)?)?;
        let d = Dyadic::from_i128(sum);
        Some(Dyadic { odd: d.odd, shift: if sum == 0 { 0 } else { d.shift + lo.shift } })
    }
}

/// Roles of the two variables of `p`: `x` and `y` when `p` only uses
/// those names, otherwise its two variables in alphabetical order.
pub fn image_vars(p: &MPoly) -> Result<(Var, Var)> {
    let vars = p.support_vars();
    let (x, y) = (Var::new("x"), Var::new("y"));
    if vars.iter().all(|v| *v == x || *v == y) {
        return Ok((x, y));
    }
    let mut it = vars.iter();
    match (it.next(), it.next(), it.next()) {
        (Some(a), Some(b), None) => Ok((a.clone(), b.clone())),
        _ => Err(ExpansionError::TooManyVariables(p.to_string())),
    }
}

/// Polynomial terms as `(coefficient, i, j)` for `x^i y^j`.
fn bivariate_terms(p: &MPoly, x: &Var, y: &Var) -> Vec<(Rat, u32, u32)> {
    p.terms().map(|(e, c)| (c.clone(), e.exponent(x), e.exponent(y))).collect()
}

fn dedup(values: &[Rat]) -> Vec<Rat> {
    let mut v = values.to_vec();
    v.sort();
    v.dedup();
    v
}

/// Exact `|{P(a, b) : a in A, b in B}|`.
pub fn image_size(p: &MPoly, a: &[Rat], b: &[Rat]) -> Result<u64> {
    let (x, y) = image_vars(p)?;
    let a = dedup(a);
    let b = dedup(b);
    if a.is_empty() || b.is_empty() {
        return Err(ExpansionError::EmptySet);
    }
    let evals = a.len() as u128 * b.len() as u128;
    if evals > MAX_EVALUATIONS as u128 {
        return Err(ExpansionError::Guard { what: "evaluations", size: evals.to_string(), limit: MAX_EVALUATIONS });
    }
    let terms = bivariate_terms(p, &x, &y);
    let (dx, dy) = (p.degree_in(&x), p.degree_in(&y));
    // clear every denominator: multiply P by L, a by la, b by lb
    let l = denominator_lcm(terms.iter().map(|(c, _, _)| c));
    let la = denominator_lcm(&a);
    let lb = denominator_lcm(&b);
    let int_terms: Vec<(BigInt, u32, u32)> =
        terms.iter().map(|(c, i, j)| ((c * &Rat::from_int(l.clone())).numer().clone(), *i, *j)).collect();
    // powers[k][i] = (la a_k)^i la^(dx - i), so that every term is an integer
    let powers = |vals: &[Rat], lv: &BigInt, deg: u32| -> Vec<Vec<BigInt>> {
        vals.iter()
            .map(|v| {
                let s = (v * &Rat::from_int(lv.clone())).numer().clone();
                (0..=deg)
                    .map(|i| num_traits::pow(s.clone(), i as usize) * num_traits::pow(lv.clone(), (deg - i) as usize))
                    .collect()
            })
            .collect()
    };
    let pa = powers(&a, &la, dx);
    let pb = powers(&b, &lb, dy);
    if let Some(n) = image_size_dyadic(&int_terms, &pa, &pb) {
        return Ok(n);
    }
    let mut seen: HashSet<BigInt> = HashSet::new();
    for ra in &pa {
        for rb in &pb {
            let v: BigInt = int_terms.iter().map(|(c, i, j)| c * &ra[*i as usize] * &rb[*j as usize]).sum();
            seen.insert(v);
        }
    }
    Ok(seen.len() as u64)
}

fn image_size_dyadic(terms: &[(BigInt, u32, u32)], pa: &[Vec<BigInt>], pb: &[Vec<BigInt>]) -> Option<u64> {
    let conv = |rows: &[Vec<BigInt>]| -> Option<Vec<Vec<Dyadic>>> {
        rows.iter().map(|r| r.iter().map(Dyadic::from_big).collect()).collect()
    };
    let da = conv(pa)?;
    let db = conv(pb)?;
    let dt: Vec<(Dyadic, usize, usize)> =
        terms.iter().map(|(c, i, j)| Some((Dyadic::from_big(c)?, *i as usize, *j as usize))).collect::<Option<_>>()?;
    let mut seen: HashSet<Dyadic> = HashSet::with_capacity(da.len().max(db.len()) * 4);
    for ra in &da {
        // fold the x-part of each term once per a
        let partial: Vec<(Dyadic, usize)> =
            dt.iter().map(|(c, i, j)| Some((c.mul(ra[*i])?, *j))).collect::<Option<_>>()?;
        for rb in &db {
            let mut acc = Dyadic::ZERO;
            for (c, j) in &partial {
                acc = acc.add(c.mul(rb[*j])?)?;
            }
            seen.insert(acc);
        }
    }
    Some(seen.len() as u64)
}

/// Exact image size over formal elements.
pub fn image_size_formal(p: &MPoly, a: &[MPoly], b: &[MPoly]) -> Result<u64> {
    let (x, y) = image_vars(p)?;
    if a.is_empty() || b.is_empty() {
        return Err(ExpansionError::EmptySet);
    }
    let evals = a.len() as u128 * b.len() as u128;
    if evals > MAX_EVALUATIONS as u128 {
        return Err(ExpansionError::Guard { what: "evaluations", size: evals.to_string(), limit: MAX_EVALUATIONS });
    }
    let mut seen: HashSet<MPoly> = HashSet::new();
    for ea in a {
        let pa = p.substitute(&x, ea);
        for eb in b {
            seen.insert(pa.substitute(&y, eb));
        }
    }
    Ok(seen.len() as u64)
}

/// Set family for growth series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Ap {
        start: Rat,
        step: Rat,
    },
    Gp {
        start: Rat,
        ratio: Rat,
    },
    /// Sizes are read as coefficient bounds; the row size is `|B|`.
    Witness {
        generators: Generators,
        degree_cap: u32,
    },
}

impl Family {
    /// `{1, 2, ..., N}`.
    pub fn ap_default() -> Family {
        Family::Ap { start: Rat::one(), step: Rat::one() }
    }

    /// `{1, 2, 4, ..., 2^(N-1)}`.
    pub fn gp_default() -> Family {
        Family::Gp { start: Rat::one(), ratio: Rat::from(2) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExpansionRow {
    pub set_size: u64,
    pub image_size: u64,
    /// `log(image_size) / log(set_size)` in thousandths.
    #[serde(serialize_with = "serialize_milli")]
    pub exponent: i64,
}

fn serialize_milli<S: serde::Serializer>(m: &i64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&format_milli(*m))
}

pub fn format_milli(m: i64) -> String {
    let sign = if m < 0 { "-" } else { "" };
    format!("{sign}{}.{:03}", m.abs() / 1000, m.abs() % 1000)
}

impl ExpansionRow {
    pub fn exponent_f64(&self) -> f64 {
        self.exponent as f64 / 1000.0
    }
}

/// `log(image) / log(n)` rounded half-to-even to thousandths.
pub fn exponent_milli(image: u64, n: u64) -> Result<i64> {
    if n < 2 {
        return Err(ExpansionError::SetTooSmall(n));
    }
    let e = (image as f64).ln() / (n as f64).ln();
    Ok((e * 1000.0).round_ties_even() as i64)
}

/// One row per entry of `sizes`.
pub fn expansion_series(p: &MPoly, family: &Family, sizes: &[u64]) -> Result<Vec<ExpansionRow>> {
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExpansionError::NotAscending);
    }
    let mut rows = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let (set_size, image) = match family {
            Family::Ap { start, step } => {
                let s = ap_set(start, step, n as usize)?;
                (n, image_size(p, &s, &s)?)
            }
            Family::Gp { start, ratio } => {
                let s = gp_set(start, ratio, n as usize)?;
                (n, image_size(p, &s, &s)?)
            }
            Family::Witness { generators, degree_cap } => {
                let cb = u32::try_from(n).map_err(|_| ExpansionError::InvalidParams("coeff bound too large".into()))?;
                let params = WitnessParams::new(generators.clone(), *degree_cap, cb)?;
                match witness_b(&params)? {
                    WitnessSet::Formal(s) => {
                        let elems: Vec<MPoly> = s.iter().collect();
                        (s.len(), image_size_formal(p, &elems, &elems)?)
                    }
                    WitnessSet::Integer { elements, .. } => {
                        (elements.len() as u64, image_size(p, &elements, &elements)?)
                    }
                }
            }
        };
        rows.push(ExpansionRow { set_size, image_size: image, exponent: exponent_milli(image, set_size)? });
    }
    Ok(rows)
}

/// CSV with header `N,image_size,exponent`.
pub fn to_csv(rows: &[ExpansionRow]) -> String {
    let mut out = String::from("N,image_size,exponent\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", r.set_size, r.image_size, format_milli(r.exponent));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;

    fn p(s: &str) -> MPoly {
        parse_poly(s).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&k| Rat::from(k)).collect()
    }

    #[test]
    fn progressions() {
        assert_eq!(ap_set(&Rat::zero(), &Rat::one(), 5).unwrap(), ints(&[0, 1, 2, 3, 4]));
        assert_eq!(gp_set(&Rat::one(), &Rat::from(2), 4).unwrap(), ints(&[1, 2, 4, 8]));
        assert!(matches!(ap_set(&Rat::zero(), &Rat::zero(), 3), Err(ExpansionError::Degenerate(_))));
        assert!(gp_set(&Rat::one(), &Rat::from(-1), 3).is_err());
        assert!(gp_set(&Rat::zero(), &Rat::from(2), 3).is_err());
    }

    #[test]
    fn witness_examples() {
        let s = match witness_b(&WitnessParams::formal(&["s"], 2, 2).unwrap()).unwrap() {
            WitnessSet::Formal(s) => s,
            _ => unreachable!(),
        };
        let mut got: Vec<MPoly> = s.iter().collect();
        got.sort();
        let mut want = vec![p("0"), p("1"), p("s"), p("s+1")];
        want.sort();
        assert_eq!(got, want);
        assert_eq!(witness_b(&WitnessParams::formal(&["s"], 1, 7).unwrap()).unwrap().len(), 7);
        assert_eq!(witness_b(&WitnessParams::formal(&["a", "b"], 2, 2).unwrap()).unwrap().len(), 16);
        let big = WitnessParams::formal(&["a", "b"], 3, 5).unwrap();
        assert!(matches!(witness_b(&big), Err(ExpansionError::Guard { .. })));
        assert!(WitnessParams::formal(&["a"], 2, 1).is_err());
        assert!(WitnessParams::formal(&["a", "a"], 2, 2).is_err());
    }

    #[test]
    fn integer_mode_counts_collisions() {
        // basis {1, 2}: a0 + 2 a1 with a in 0..3 gives 0..=6, 9 combos, 7 values
        let w = witness_b(&WitnessParams::integer(&[2], 2, 3).unwrap()).unwrap();
        let WitnessSet::Integer { elements, combinations, collisions } = w else { unreachable!() };
        assert_eq!((elements.len(), combinations, collisions), (7, 9, 2));
        let w = witness_b(&WitnessParams::integer(&[10], 2, 3).unwrap()).unwrap();
        assert!(matches!(w, WitnessSet::Integer { collisions: 0, .. }));
    }

    #[test]
    fn containment_examples() {
        let params = WitnessParams::formal(&["s"], 2, 2).unwrap();
        for route in [ContainmentRoute::Coordinatewise, ContainmentRoute::Pairwise] {
            let r = containment_check_into(Multiplier::Generator(0), Multiplier::One, &params, 3, 4, route).unwrap();
            assert!(r.holds);
        }
        let params = WitnessParams::formal(&["s"], 1, 3).unwrap();
        assert!(containment_check(Multiplier::Generator(0), Multiplier::Generator(0), &params).unwrap().holds);
        // target cap d rather than d + 1
        let params = WitnessParams::formal(&["s"], 2, 2).unwrap();
        for route in [ContainmentRoute::Coordinatewise, ContainmentRoute::Pairwise] {
            let r = containment_check_into(Multiplier::Generator(0), Multiplier::One, &params, 2, 4, route).unwrap();
            assert!(!r.holds);
            let z = r.counterexample.unwrap();
            assert!(z.degree_in(&Var::new("s")) >= 2);
        }
        // target coefficient bound r rather than 2r
        let r =
            containment_check_into(Multiplier::One, Multiplier::One, &params, 3, 2, ContainmentRoute::Coordinatewise)
                .unwrap();
        assert!(!r.holds);
        assert!(!in_witness_set(&r.counterexample.unwrap(), &[Var::new("s")], 3, 2));
    }

    #[test]
    fn zk_examples() {
        let pairs = [(Multiplier::One, Multiplier::One)];
        let params = WitnessParams::formal(&["s"], 2, 4).unwrap();
        let z = zk_ratio(&params, &pairs).unwrap();
        // S + S is the box 0..=6 in both coordinates
        assert_eq!((z.s_size.as_str(), z.z_size.as_str()), ("16", "49"));
        let gp = generator_pairs(&params);
        let r2 = zk_ratio(&params, &gp).unwrap().ratio;
        let r3 = zk_ratio(&params.with(3, 4).unwrap(), &gp).unwrap().ratio;
        assert!(r3 <= r2);
    }

    #[test]
    fn image_examples() {
        let a = ap_set(&Rat::zero(), &Rat::one(), 10).unwrap();
        assert_eq!(image_size(&p("x+y"), &a, &a).unwrap(), 19);
        let g = gp_set(&Rat::one(), &Rat::from(2), 10).unwrap();
        assert_eq!(image_size(&p("x*y"), &g, &g).unwrap(), 19);
        let a = ap_set(&Rat::one(), &Rat::one(), 8).unwrap();
        // 17 = 3^2 + 2^3 = 4^2 + 1^3 and 65 = 1^2 + 4^3 = 8^2 + 1^3
        assert_eq!(image_size(&p("x^2+y^3"), &a, &a).unwrap(), 62);
        let h = ap_set(&Rat::new(1, 2), &Rat::new(1, 3), 6).unwrap();
        let brute: HashSet<Rat> =
            h.iter().flat_map(|u| h.iter().map(move |v| &(&(u * u) * &Rat::new(1, 2)) - v)).collect();
        assert_eq!(image_size(&p("1/2*x^2 - y"), &h, &h).unwrap(), brute.len() as u64);
        assert_eq!(image_size(&p("3"), &h, &h).unwrap(), 1);
    }

    #[test]
    fn big_path_matches_dyadic_path() {
        // 3^80 does not fit the fast path
        let g = gp_set(&Rat::one(), &Rat::from(3), 90).unwrap();
        assert_eq!(image_size(&p("x*y"), &g, &g).unwrap(), 179);
        let g = gp_set(&Rat::one(), &Rat::from(2), 200).unwrap();
        assert_eq!(image_size(&p("x+y"), &g, &g).unwrap(), 200 * 201 / 2);
    }

    #[test]
    fn dyadic_arithmetic() {
        let a = Dyadic::from_i128(12);
        assert_eq!(a, Dyadic { odd: 3, shift: 2 });
        assert_eq!(a.add(Dyadic::from_i128(-12)).unwrap(), Dyadic::ZERO);
        assert_eq!(a.add(Dyadic::from_i128(4)).unwrap(), Dyadic::from_i128(16));
        assert_eq!(a.mul(Dyadic::from_i128(-5)).unwrap(), Dyadic::from_i128(-60));
    }

    #[test]
    fn series_and_csv() {
        let rows = expansion_series(&p("x+y"), &Family::ap_default(), &[16, 64]).unwrap();
        assert_eq!(rows[0].image_size, 31);
        assert_eq!(rows[0].exponent, exponent_milli(31, 16).unwrap());
        assert_eq!(to_csv(&rows).lines().next(), Some("N,image_size,exponent"));
        assert!(expansion_series(&p("x+y"), &Family::ap_default(), &[64, 16]).is_err());
        assert!(matches!(exponent_milli(1, 1), Err(ExpansionError::SetTooSmall(1))));
        assert_eq!(format_milli(1238), "1.238");
        let fam = Family::Witness { generators: Generators::Formal(vec![Var::new("s")]), degree_cap: 2 };
        let rows = expansion_series(&p("x+y"), &fam, &[2, 3]).unwrap();
        assert_eq!((rows[0].set_size, rows[0].image_size), (4, 9));
        assert_eq!((rows[1].set_size, rows[1].image_size), (9, 25));
    }
}
