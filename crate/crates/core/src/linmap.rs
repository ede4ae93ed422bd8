//! Endomorphisms of `E_N` given by generator images.

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{Element, Monomial, Truncation};
use crate::scalar::Scalar;

/// Eventually-uniform rule for the images of generators without an explicit
/// image. It describes every index above the truncation as well, which is
/// what lets classification speak about infinite index sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailRule {
    /// `e_n -> e_n`
    Identity,
    /// `e_n -> -e_n`
    Negation,
    /// `e_n -> -e_n + 2 m e_n`
    PrefixNegation(Monomial),
    /// `e_n -> e_n` for even `n`, `-e_n` for odd `n`.
    IndexParity,
    /// `e_{2i-1} <-> e_{2i}`
    PairSwap,
}

/// How the tail acts on a generator, for index-set bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TailAction {
    Fixed,
    Negated,
    Moved,
}

impl TailRule {
    pub fn name(self) -> &'static str {
        match self {
            TailRule::Identity => "identity",
            TailRule::Negation => "negation",
            TailRule::PrefixNegation(_) => "prefix_negation",
            TailRule::IndexParity => "index_parity",
            TailRule::PairSwap => "pair_swap",
        }
    }

    pub fn image<S: Scalar>(self, n: Truncation, index: usize) -> Result<Element<S>> {
        let e = Element::generator(n, index)?;
        Ok(match self {
            TailRule::Identity => e,
            TailRule::Negation => -e,
            TailRule::PrefixNegation(m) => {
                let me = Element::monomial(n, m, S::from_int(2))?.checked_mul(&e)?;
                &me - &e
            }
            TailRule::IndexParity if index.is_multiple_of(2) => e,
            TailRule::IndexParity => -e,
            TailRule::PairSwap => {
                let partner = if index % 2 == 1 { index + 1 } else { index - 1 };
                if partner > n.get() {
                    return Err(Error::TailUnrealisable {
                        rule: self.name(),
                        n: n.get(),
                    });
                }
                Element::generator(n, partner)?
            }
        })
    }

    /// Action on an index above the truncation with the given parity.
    pub(crate) fn action_for_parity(self, odd: bool) -> TailAction {
        match self {
            TailRule::Identity => TailAction::Fixed,
            TailRule::Negation => TailAction::Negated,
            TailRule::IndexParity if odd => TailAction::Negated,
            TailRule::IndexParity => TailAction::Fixed,
            TailRule::PrefixNegation(_) | TailRule::PairSwap => TailAction::Moved,
        }
    }

    /// Whether `(e_n + tail(e_n)) / 2` has no even-length part.
    pub fn invariant_is_odd(self) -> bool {
        match self {
            TailRule::PrefixNegation(m) => m.is_even(),
            _ => true,
        }
    }
}

/// Substitutes `e_i -> images[i - 1]` into `a`, extended multiplicatively.
pub(crate) fn substitute<S: Scalar>(n: Truncation, images: &[Element<S>], a: &Element<S>) -> Element<S> {
    let mut raw = Vec::new();
    for (m, c) in a.terms() {
        let mut prod = Element::constant(n, c.clone());
        for i in m.indices() {
            prod = &prod * &images[i - 1];
            if prod.is_zero() {
                break;
            }
        }
        raw.extend(prod.terms().iter().cloned());
    }
    Element::from_terms_unchecked(n, raw)
}

/// Checks `x_i x_j + x_j x_i = 0` for all `i <= j`.
pub(crate) fn check_anticommuting<S: Scalar>(images: &[Element<S>]) -> Result<()> {
    for i in 0..images.len() {
        for j in i..images.len() {
            let ij = &images[i] * &images[j];
            let residual = if i == j { ij } else { &ij + &(&images[j] * &images[i]) };
            if !residual.is_zero() {
                return Err(Error::RelationViolation {
                    i: i + 1,
                    j: j + 1,
                    residual: residual.to_string(),
                });
            }
        }
    }
    Ok(())
}

/// An endomorphism of `E_N` determined by the images of `e_1..e_N`.
///
/// Equality is extensional on `e_1..e_N`: two maps are equal when they
/// agree on every generator of the truncation, whatever their tail rules.
#[derive(Debug, Clone)]
pub struct Endomorphism<S: Scalar> {
    n: Truncation,
    explicit: BTreeMap<usize, Element<S>>,
    tail: TailRule,
    images: Vec<Element<S>>,
    verified: bool,
}

impl<S: Scalar> PartialEq for Endomorphism<S> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.images == other.images
    }
}

impl<S: Scalar> Endomorphism<S> {
    pub fn new(n: Truncation, explicit: BTreeMap<usize, Element<S>>, tail: TailRule) -> Result<Self> {
        for (&i, image) in &explicit {
            n.check_index(i)?;
            n.ensure_same(image.truncation())?;
            if !image.constant_term().is_zero() {
                return Err(Error::NonzeroConstantTerm { index: i });
            }
        }
        if let TailRule::PrefixNegation(m) = tail {
            if !n.contains(m) {
                return Err(Error::IndexOutOfRange {
                    index: m.max_index().unwrap_or(0),
                    n: n.get(),
                });
            }
            let top = m.max_index().unwrap_or(0);
            if let Some(gap) = (1..=top).find(|i| !explicit.contains_key(i)) {
                return Err(Error::TailPrefixOverlap { index: gap });
            }
        }
        let images = (1..=n.get())
            .map(|i| match explicit.get(&i) {
                Some(e) => Ok(e.clone()),
                None => tail.image(n, i),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n,
            explicit,
            tail,
            images,
            verified: false,
        })
    }

    /// Convenience constructor from `(index, image)` pairs.
    pub fn from_images<I>(n: Truncation, explicit: I, tail: TailRule) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, Element<S>)>,
    {
        Self::new(n, explicit.into_iter().collect(), tail)
    }

    pub fn identity(n: Truncation) -> Self {
        Self::new(n, BTreeMap::new(), TailRule::Identity)
            .expect("identity map is well formed")
            .mark_verified()
    }

    fn mark_verified(mut self) -> Self {
        self.verified = true;
        self
    }

    pub fn truncation(&self) -> Truncation {
        self.n
    }

    pub fn explicit(&self) -> &BTreeMap<usize, Element<S>> {
        &self.explicit
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    /// Images of `e_1..e_N`.
    pub fn images(&self) -> &[Element<S>] {
        &self.images
    }

    pub fn image(&self, index: usize) -> Result<&Element<S>> {
        self.n.check_index(index)?;
        Ok(&self.images[index - 1])
    }

    /// Checks that the images anticommute pairwise and square to zero, so the
    /// generator map extends to an algebra endomorphism.
    pub fn verify_relations(mut self) -> Result<Self> {
        check_anticommuting(&self.images)?;
        self.verified = true;
        Ok(self)
    }

    fn require_verified(&self) -> Result<()> {
        if self.verified {
            Ok(())
        } else {
            Err(Error::Unverified)
        }
    }

    pub fn apply(&self, a: &Element<S>) -> Result<Element<S>> {
        self.require_verified()?;
        self.n.ensure_same(a.truncation())?;
        Ok(substitute(self.n, &self.images, a))
    }

    /// `self ∘ other`, materialised with explicit images for every generator.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.require_verified()?;
        other.require_verified()?;
        self.n.ensure_same(other.n)?;
        let explicit = other
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| (i + 1, substitute(self.n, &self.images, img)))
            .collect();
        Self::new(self.n, explicit, TailRule::Identity)?.verify_relations()
    }

    /// First generator index where `φ(φ(e_i)) != e_i`.
    pub fn involution_failure(&self) -> Result<Option<usize>> {
        self.require_verified()?;
        for (i, img) in self.images.iter().enumerate() {
            let twice = substitute(self.n, &self.images, img);
            if twice != Element::generator(self.n, i + 1)? {
                return Ok(Some(i + 1));
            }
        }
        Ok(None)
    }

    pub fn is_involution(&self) -> Result<bool> {
        Ok(self.involution_failure()?.is_none())
    }

    /// The fixed elements `a_i = (e_i + φ(e_i)) / 2`.
    pub fn invariant_family(&self) -> Result<InvariantFamily<S>> {
        if let Some(index) = self.involution_failure()? {
            return Err(Error::NotAnInvolution { index });
        }
        let half = S::half();
        let a: Vec<_> = self
            .images
            .iter()
            .enumerate()
            .map(|(i, img)| {
                let e = Element::generator(self.n, i + 1).expect("index in range");
                (&e + img).scale(&half)
            })
            .collect();
        debug_assert!(a.iter().all(|x| &substitute(self.n, &self.images, x) == x));
        Ok(InvariantFamily {
            n: self.n,
            a,
            tail_odd: self.tail.invariant_is_odd(),
        })
    }

    /// Keeps only the degree-one part of each generator image.
    pub fn linearize(&self) -> Result<Self> {
        self.require_verified()?;
        let explicit = self.explicit.iter().map(|(&i, img)| (i, img.degree_part(1))).collect();
        let tail = match self.tail {
            TailRule::PrefixNegation(_) => TailRule::Negation,
            other => other,
        };
        let lin = Self::new(self.n, explicit, tail)?;
        // degree-one images are odd, so they always anticommute
        lin.verify_relations()
    }
}

/// `a_i = (e_i + φ(e_i)) / 2` for each generator of a verified involution.
///
/// `b_j = a_j` is the even component of `e_j` in the induced grading and
/// `c_j = e_j - a_j` the odd one.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantFamily<S: Scalar> {
    n: Truncation,
    a: Vec<Element<S>>,
    tail_odd: bool,
}

impl<S: Scalar> InvariantFamily<S> {
    pub fn a(&self, index: usize) -> Result<&Element<S>> {
        self.n.check_index(index)?;
        Ok(&self.a[index - 1])
    }

    pub fn all(&self) -> &[Element<S>] {
        &self.a
    }

    pub fn b(&self, index: usize) -> Result<&Element<S>> {
        self.a(index)
    }

    pub fn c(&self, index: usize) -> Result<Element<S>> {
        let e = Element::generator(self.n, index)?;
        Ok(&e - self.a(index)?)
    }

    /// The tail's invariant pattern lies in the odd-length span.
    pub fn tail_is_odd(&self) -> bool {
        self.tail_odd
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TailRepr {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    prefix: Option<Vec<usize>>,
}

impl Serialize for TailRule {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let prefix = match self {
            TailRule::PrefixNegation(m) => Some(m.indices().collect()),
            _ => None,
        };
        TailRepr {
            kind: self.name().to_string(),
            prefix,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TailRule {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TailRepr::deserialize(d)?;
        match (repr.kind.as_str(), repr.prefix) {
            ("identity", None) => Ok(TailRule::Identity),
            ("negation", None) => Ok(TailRule::Negation),
            ("index_parity", None) => Ok(TailRule::IndexParity),
            ("pair_swap", None) => Ok(TailRule::PairSwap),
            ("prefix_negation", Some(p)) => Monomial::from_indices(&p)
                .map(TailRule::PrefixNegation)
                .map_err(D::Error::custom),
            ("prefix_negation", None) => Err(D::Error::missing_field("prefix")),
            (kind, Some(_)) if kind != "prefix_negation" => {
                Err(D::Error::custom(format!("tail kind {kind:?} takes no prefix")))
            }
            (kind, _) => Err(D::Error::unknown_variant(
                kind,
                &["identity", "negation", "prefix_negation", "index_parity", "pair_swap"],
            )),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[serde(bound(serialize = "S: Scalar", deserialize = "S: Scalar"))]
struct EndomorphismRepr<S> {
    #[serde(rename = "N")]
    n: usize,
    #[serde(default)]
    explicit: BTreeMap<String, Element<S>>,
    tail: TailRule,
}

impl<S: Scalar> Serialize for Endomorphism<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        EndomorphismRepr {
            n: self.n.get(),
            explicit: self.explicit.iter().map(|(i, e)| (i.to_string(), e.clone())).collect(),
            tail: self.tail,
        }
        .serialize(s)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Endomorphism<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = EndomorphismRepr::<S>::deserialize(d)?;
        let n = Truncation::new(repr.n).map_err(D::Error::custom)?;
        let mut explicit = BTreeMap::new();
        for (k, v) in repr.explicit {
            let i: usize = k
                .parse()
                .map_err(|_| D::Error::custom(format!("explicit key {k:?} is not an index")))?;
            explicit.insert(i, v);
        }
        Endomorphism::new(n, explicit, repr.tail).map_err(D::Error::custom)
    }
}
