//! Named involutions and the gradings they induce: the homogeneous models,
//! method 1 shifts, method 2 prefixes, triangular automorphisms and the
//! group they generate.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{Element, Monomial, Truncation};
use crate::grading::Grading;
use crate::linmap::{Endomorphism, TailRule};
use crate::scalar::Scalar;

/// Gradings in which every generator is homogeneous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HomogeneousModel {
    /// `e_1..e_k` even, the rest odd. `Ek(0)` is the canonical grading.
    Ek(usize),
    /// `e_1..e_k` odd, the rest even.
    EkStar(usize),
    /// Even indices even, odd indices odd.
    EInf,
    /// Every generator odd.
    ECan,
}

impl HomogeneousModel {
    /// `E_0` and `E_can` are the same grading; this picks `E_can`.
    pub fn normalized(self) -> Self {
        match self {
            HomogeneousModel::Ek(0) => HomogeneousModel::ECan,
            m => m,
        }
    }

    fn bound(self) -> usize {
        match self {
            HomogeneousModel::Ek(k) | HomogeneousModel::EkStar(k) => k,
            _ => 0,
        }
    }

    /// Parity of `e_index` in the model.
    pub fn is_odd(self, index: usize) -> bool {
        match self {
            HomogeneousModel::Ek(k) => index > k,
            HomogeneousModel::EkStar(k) => index <= k,
            HomogeneousModel::EInf => index % 2 == 1,
            HomogeneousModel::ECan => true,
        }
    }
}

impl fmt::Display for HomogeneousModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomogeneousModel::Ek(k) => write!(f, "E_{k}"),
            HomogeneousModel::EkStar(k) => write!(f, "E_{k}*"),
            HomogeneousModel::EInf => f.write_str("E_inf"),
            HomogeneousModel::ECan => f.write_str("E_can"),
        }
    }
}

impl FromStr for HomogeneousModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("unknown model tag {s:?}"));
        match s {
            "E_inf" => return Ok(HomogeneousModel::EInf),
            "E_can" => return Ok(HomogeneousModel::ECan),
            _ => {}
        }
        let rest = s.strip_prefix("E_").ok_or_else(bad)?;
        let (digits, star) = match rest.strip_suffix('*') {
            Some(d) => (d, true),
            None => (rest, false),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let k: usize = digits.parse().map_err(|_| bad())?;
        Ok(if star {
            HomogeneousModel::EkStar(k)
        } else {
            HomogeneousModel::Ek(k)
        })
    }
}

impl Serialize for HomogeneousModel {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HomogeneousModel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shift data for method 1: `e_j -> -e_j + 2 d_j` on `J`, `e_i -> e_i` on
/// `plus`, `e_i -> -e_i` on `minus`. Unlisted indices follow the tail.
#[derive(Debug, Clone, PartialEq)]
pub struct Method1Spec<S: Scalar> {
    pub plus: BTreeSet<usize>,
    pub minus: BTreeSet<usize>,
    pub shifts: BTreeMap<usize, Element<S>>,
}

impl<S: Scalar> Default for Method1Spec<S> {
    fn default() -> Self {
        Self {
            plus: BTreeSet::new(),
            minus: BTreeSet::new(),
            shifts: BTreeMap::new(),
        }
    }
}

/// `T_n(e_n) = -e_n + 2P`, every other generator fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangularSpec<S: Scalar> {
    pub n: usize,
    pub p: Element<S>,
}

/// Data for the type-3 relation `e_1..e_k (V_p e_r + V_r e_p) = 2 e_1..e_k (V_p W_r + V_r W_p)`.
/// Missing entries of `v` and `w` are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Type3RelationInstance<S: Scalar> {
    pub k: usize,
    pub v: BTreeMap<usize, Element<S>>,
    pub w: BTreeMap<usize, Element<S>>,
}

/// How a grading was built; used to produce equivalence certificates.
#[derive(Debug, Clone, PartialEq)]
pub enum Construction<S: Scalar> {
    Homogeneous(HomogeneousModel),
    Method1 { spec: Method1Spec<S>, tail: TailRule },
    Method2 { k: usize, t: usize },
    Triangular(TriangularSpec<S>),
    Tau { mask: u64, specs: Vec<TriangularSpec<S>> },
}

impl<S: Scalar> Construction<S> {
    /// Triangular maps and their products are method 1 gradings with an
    /// empty `minus` set.
    pub fn as_method1(&self) -> Option<(Method1Spec<S>, TailRule)> {
        let from_triangular = |specs: &mut dyn Iterator<Item = &TriangularSpec<S>>| {
            let shifts = specs.map(|s| (s.n, s.p.clone())).collect();
            (
                Method1Spec {
                    shifts,
                    ..Method1Spec::default()
                },
                TailRule::Identity,
            )
        };
        match self {
            Construction::Method1 { spec, tail } => Some((spec.clone(), *tail)),
            Construction::Triangular(t) => Some(from_triangular(&mut std::iter::once(t))),
            Construction::Tau { mask, specs } => Some(from_triangular(
                &mut specs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, s)| s),
            )),
            _ => None,
        }
    }
}

/// The sign involution of a homogeneous model.
pub fn homogeneous<S: Scalar>(model: HomogeneousModel, n: Truncation) -> Result<Grading<S>> {
    if model.bound() > n.get() {
        return Err(Error::InvalidArgument(format!(
            "{model} needs at least {} generators, truncation is {}",
            model.bound(),
            n.get()
        )));
    }
    let gens = |k: usize, sign: S| -> Result<BTreeMap<usize, Element<S>>> {
        (1..=k)
            .map(|i| Ok((i, Element::generator(n, i)?.scale(&sign))))
            .collect()
    };
    let phi = match model {
        HomogeneousModel::Ek(k) => Endomorphism::new(n, gens(k, S::one())?, TailRule::Negation)?,
        HomogeneousModel::EkStar(k) => Endomorphism::new(n, gens(k, -S::one())?, TailRule::Identity)?,
        HomogeneousModel::EInf => Endomorphism::new(n, BTreeMap::new(), TailRule::IndexParity)?,
        HomogeneousModel::ECan => Endomorphism::new(n, BTreeMap::new(), TailRule::Negation)?,
    };
    Ok(Grading::from_involution(phi)?.with_construction(Construction::Homogeneous(model)))
}

fn violation(condition: u8, index: usize, reason: impl Into<String>) -> Error {
    Error::SpecViolation {
        condition,
        index,
        reason: reason.into(),
    }
}

/// Builds the method 1 involution. `tail` decides the unlisted indices and
/// must be `Identity` or `Negation`.
pub fn method1<S: Scalar>(spec: &Method1Spec<S>, n: Truncation, tail: TailRule) -> Result<Grading<S>> {
    let tail_negates = match tail {
        TailRule::Identity => false,
        TailRule::Negation => true,
        other => {
            return Err(Error::InvalidArgument(format!(
                "method 1 takes an identity or negation tail, not {}",
                other.name()
            )))
        }
    };
    let mut seen = BTreeSet::new();
    let listed = spec.plus.iter().chain(&spec.minus).chain(spec.shifts.keys());
    for &i in listed {
        n.check_index(i)?;
        if !seen.insert(i) {
            return Err(Error::InvalidArgument(format!("index {i} is listed twice")));
        }
    }
    let is_minus = |i: usize| spec.minus.contains(&i) || (tail_negates && !seen.contains(&i));
    for (&j, d) in &spec.shifts {
        n.ensure_same(d.truncation())?;
        for (m, _) in d.terms() {
            if m.is_even() {
                return Err(violation(1, j, format!("monomial {m} has even length")));
            }
            if let Some(bad) = m.indices().find(|i| spec.shifts.contains_key(i)) {
                return Err(violation(2, j, format!("monomial {m} uses e{bad}, which is not in I")));
            }
            if m.indices().filter(|&i| is_minus(i)).count() % 2 == 1 {
                return Err(violation(
                    3,
                    j,
                    format!("monomial {m} has an odd number of factors in I-"),
                ));
            }
        }
    }
    let mut explicit = BTreeMap::new();
    for &i in &spec.plus {
        explicit.insert(i, Element::generator(n, i)?);
    }
    for &i in &spec.minus {
        explicit.insert(i, -Element::generator(n, i)?);
    }
    for (&j, d) in &spec.shifts {
        let image = &d.scale(&S::from_int(2)) - &Element::generator(n, j)?;
        explicit.insert(j, image);
    }
    let phi = Endomorphism::new(n, explicit, tail)?;
    Ok(Grading::from_involution(phi)?.with_construction(Construction::Method1 {
        spec: spec.clone(),
        tail,
    }))
}

/// Method 2: `e_1..e_k` fixed, `e_{k+1}..e_{k+t}` negated and every later
/// generator sent to `-e_n + 2 e_1..e_{k+t} e_n`.
pub fn method2<S: Scalar>(k: usize, t: usize, n: Truncation) -> Result<Grading<S>> {
    if t.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("t must be odd, got {t}")));
    }
    if k + t >= n.get() {
        return Err(Error::InvalidArgument(format!(
            "k + t = {} must be below the truncation {}",
            k + t,
            n.get()
        )));
    }
    let mut explicit = BTreeMap::new();
    for i in 1..=k + t {
        let e = Element::generator(n, i)?;
        explicit.insert(i, if i <= k { e } else { -e });
    }
    let prefix = Monomial::prefix(k + t);
    let phi = Endomorphism::new(n, explicit, TailRule::PrefixNegation(prefix))?;
    Ok(Grading::from_involution(phi)?.with_construction(Construction::Method2 { k, t }))
}

/// The map whose grading is not of canonical type: `e_1 -> -e_1`,
/// `e_n -> -e_n + 2 e_1 e_n` for `n > 1`.
pub fn prop_minus<S: Scalar>(n: Truncation) -> Result<Grading<S>> {
    method2(0, 1, n)
}

fn check_triangular<S: Scalar>(spec: &TriangularSpec<S>, n: Truncation) -> Result<()> {
    n.check_index(spec.n)?;
    n.ensure_same(spec.p.truncation())?;
    if !spec.p.even_part().is_zero() {
        return Err(Error::InvalidArgument(format!("P = {} is not odd", spec.p)));
    }
    if let Some(bad) = spec.p.support().into_iter().find(|&i| i <= spec.n) {
        return Err(Error::InvalidArgument(format!(
            "P = {} uses e{bad}, but must avoid e1..e{}",
            spec.p, spec.n
        )));
    }
    Ok(())
}

fn triangular_map<S: Scalar>(spec: &TriangularSpec<S>, n: Truncation) -> Result<Endomorphism<S>> {
    let image = &spec.p.scale(&S::from_int(2)) - &Element::generator(n, spec.n)?;
    Endomorphism::from_images(n, [(spec.n, image)], TailRule::Identity)?.verify_relations()
}

/// The triangular automorphism of index `spec.n`.
pub fn triangular<S: Scalar>(spec: &TriangularSpec<S>, n: Truncation) -> Result<Endomorphism<S>> {
    check_triangular(spec, n)?;
    triangular_map(spec, n)
}

pub fn triangular_grading<S: Scalar>(spec: &TriangularSpec<S>, n: Truncation) -> Result<Grading<S>> {
    let phi = triangular(spec, n)?;
    Ok(Grading::from_involution(phi)?.with_construction(Construction::Triangular(spec.clone())))
}

/// One element of the group generated by a list of triangular maps.
#[derive(Debug, Clone)]
pub struct TauElement<S: Scalar> {
    /// Bit `i` is set when the `i`-th spec is a factor.
    pub mask: u64,
    /// Indices `n` of the factors, in spec order.
    pub factors: Vec<usize>,
    pub map: Endomorphism<S>,
    specs: Vec<TriangularSpec<S>>,
}

impl<S: Scalar> TauElement<S> {
    pub fn grading(&self) -> Result<Grading<S>> {
        Ok(
            Grading::from_involution(self.map.clone())?.with_construction(Construction::Tau {
                mask: self.mask,
                specs: self.specs.clone(),
            }),
        )
    }
}

/// All `2^M` products of the triangular maps, ordered by subset bitmask.
/// Every `P` must avoid all the generator indices the specs act on, which
/// makes the maps commute.
pub fn tau_group<S: Scalar>(specs: &[TriangularSpec<S>], n: Truncation) -> Result<Vec<TauElement<S>>> {
    if specs.len() >= 32 {
        return Err(Error::InvalidArgument(format!(
            "{} generators is too many",
            specs.len()
        )));
    }
    let moved: BTreeSet<usize> = specs.iter().map(|s| s.n).collect();
    if moved.len() != specs.len() {
        return Err(Error::InvalidArgument(
            "triangular generators must have distinct indices".into(),
        ));
    }
    let mut maps = Vec::with_capacity(specs.len());
    for spec in specs {
        check_triangular(spec, n)?;
        if let Some(bad) = spec.p.support().intersection(&moved).next() {
            return Err(Error::InvalidArgument(format!(
                "P for index {} uses e{bad}, which another generator moves",
                spec.n
            )));
        }
        maps.push(triangular_map(spec, n)?);
    }
    (0..1u64 << specs.len())
        .map(|mask| {
            let mut map = Endomorphism::identity(n);
            let mut factors = Vec::new();
            for (i, t) in maps.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    map = map.compose(t)?;
                    factors.push(specs[i].n);
                }
            }
            Ok(TauElement {
                mask,
                factors,
                map,
                specs: specs.to_vec(),
            })
        })
        .collect()
}

/// `e_{2i-1} <-> e_{2i}`.
pub fn swap_example<S: Scalar>(n: Truncation) -> Result<Endomorphism<S>> {
    if n.get() % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "swap needs an even truncation, got {}",
            n.get()
        )));
    }
    Endomorphism::new(n, BTreeMap::new(), TailRule::PairSwap)?.verify_relations()
}

/// Checks the type-3 relation for every listed pair `(p, r)`.
pub fn verify_eq1<S: Scalar>(inst: &Type3RelationInstance<S>, pairs: &[(usize, usize)], n: Truncation) -> Result<bool> {
    let prefix = Element::monomial(n, Monomial::prefix(inst.k), S::one())?;
    let get = |map: &BTreeMap<usize, Element<S>>, i: usize| -> Result<Element<S>> {
        match map.get(&i) {
            Some(e) => {
                n.ensure_same(e.truncation())?;
                Ok(e.clone())
            }
            None => Ok(Element::zero(n)),
        }
    };
    for &(p, r) in pairs {
        let (vp, vr) = (get(&inst.v, p)?, get(&inst.v, r)?);
        let (wp, wr) = (get(&inst.w, p)?, get(&inst.w, r)?);
        let (ep, er) = (Element::generator(n, p)?, Element::generator(n, r)?);
        let lhs = &prefix * &(&(&vp * &er) + &(&vr * &ep));
        let rhs = (&prefix * &(&(&vp * &wr) + &(&vr * &wp))).scale(&S::from_int(2));
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}


/// JSON form of every constructor, tagged by `family`. Elements are given
/// in text form and parsed at the spec's truncation `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstructorSpec {
    Homogeneous(HomogeneousParams),
    Method1(Method1Params),
    Method2(Method2Params),
    Triangular(TriangularParams),
    Tau(TauParams),
    PropMinus(TruncationParams),
    Swap(TruncationParams),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogeneousParams {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub model: HomogeneousModel,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Method1Params {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default)]
    pub plus: BTreeSet<usize>,
    #[serde(default)]
    pub minus: BTreeSet<usize>,
    /// Keys are generator indices written as JSON strings.
    pub shifts: BTreeMap<String, String>,
    #[serde(default = "identity_tail")]
    pub tail: TailRule,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Method2Params {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub k: usize,
    pub t: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangularParams {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub index: usize,
    pub p: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauParams {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    pub generators: Vec<TriangularText>,
    pub mask: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TruncationParams {
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TriangularText {
    pub index: usize,
    pub p: String,
}

fn identity_tail() -> TailRule {
    TailRule::Identity
}

impl ConstructorSpec {
    pub const FAMILIES: [&'static str; 7] = [
        "homogeneous",
        "method1",
        "method2",
        "triangular",
        "tau",
        "prop_minus",
        "swap",
    ];

    fn truncation_slot(&mut self) -> &mut Option<usize> {
        match self {
            ConstructorSpec::Homogeneous(p) => &mut p.n,
            ConstructorSpec::Method1(p) => &mut p.n,
            ConstructorSpec::Method2(p) => &mut p.n,
            ConstructorSpec::Triangular(p) => &mut p.n,
            ConstructorSpec::Tau(p) => &mut p.n,
            ConstructorSpec::PropMinus(p) | ConstructorSpec::Swap(p) => &mut p.n,
        }
    }

    pub fn truncation(&self) -> Option<usize> {
        *self.clone().truncation_slot()
    }

    /// Fills in `N` when the spec leaves it out.
    pub fn with_default_truncation(mut self, default: usize) -> Self {
        self.truncation_slot().get_or_insert(default);
        self
    }

    pub fn build<S: Scalar>(&self) -> Result<Grading<S>> {
        let n = Truncation::new(
            self.truncation()
                .ok_or_else(|| Error::InvalidArgument("the spec does not fix N".into()))?,
        )?;
        let parse = |s: &str| Element::<S>::parse(n, s);
        match self {
            ConstructorSpec::Homogeneous(p) => homogeneous(p.model, n),
            ConstructorSpec::Method1(p) => {
                let spec = Method1Spec {
                    plus: p.plus.clone(),
                    minus: p.minus.clone(),
                    shifts: p
                        .shifts
                        .iter()
                        .map(|(j, d)| {
                            let j = j
                                .parse::<usize>()
                                .map_err(|_| Error::Parse(format!("shift key {j:?} is not an index")))?;
                            Ok((j, parse(d)?))
                        })
                        .collect::<Result<_>>()?,
                };
                method1(&spec, n, p.tail)
            }
            ConstructorSpec::Method2(p) => method2(p.k, p.t, n),
            ConstructorSpec::Triangular(p) => triangular_grading(
                &TriangularSpec {
                    n: p.index,
                    p: parse(&p.p)?,
                },
                n,
            ),
            ConstructorSpec::Tau(p) => {
                let specs = p
                    .generators
                    .iter()
                    .map(|g| {
                        Ok(TriangularSpec {
                            n: g.index,
                            p: parse(&g.p)?,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                if specs.len() >= 32 || p.mask >= 1u64 << specs.len() {
                    return Err(Error::InvalidArgument(format!(
                        "mask {} names no subset of the {} generators",
                        p.mask,
                        specs.len()
                    )));
                }
                tau_group(&specs, n)?[p.mask as usize].grading()
            }
            ConstructorSpec::PropMinus(_) => prop_minus(n),
            ConstructorSpec::Swap(_) => Grading::from_involution(swap_example(n)?),
        }
    }
}
