//! The Z2-grading induced by an order-2 automorphism: the even component is
//! the `+1` eigenspace and the odd component the `-1` eigenspace.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::constructors::{Construction, HomogeneousModel};
use crate::error::{Error, Result};
use crate::exterior::{Element, Monomial, Truncation};
use crate::linalg::{self, coordinates, EchelonBasis};
use crate::linmap::{substitute, Endomorphism, InvariantFamily, TailAction};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(bit: u8) -> Self {
        if bit.is_multiple_of(2) {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        Parity::from_bit(self.bit() + other.bit())
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.bit())
    }
}

/// Degree of an element in a grading. Zero reports [`Degree::Even`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Even,
    Odd,
    Mixed,
}

impl Degree {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Degree::Even => Some(Parity::Even),
            Degree::Odd => Some(Parity::Odd),
            Degree::Mixed => None,
        }
    }
}

impl From<Parity> for Degree {
    fn from(p: Parity) -> Self {
        match p {
            Parity::Even => Degree::Even,
            Parity::Odd => Degree::Odd,
        }
    }
}

/// A set of generator indices: the members up to `N`, plus whether the
/// tail rule contributes infinitely many members beyond `N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexSetDescriptor {
    pub explicit_part: BTreeSet<usize>,
    pub tail_membership: bool,
}

impl IndexSetDescriptor {
    pub fn is_infinite(&self) -> bool {
        self.tail_membership
    }

    pub fn is_empty(&self) -> bool {
        self.explicit_part.is_empty() && !self.tail_membership
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GradingType {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "2")]
    Two,
    #[serde(rename = "3")]
    Three,
    /// No generator of the standard basis is an eigenvector. This is not a
    /// claim about other bases of `L`.
    #[serde(rename = "empty_in_basis")]
    EmptyInBasis,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SCase {
    S1,
    S2,
    S3,
    S4,
    S5,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    #[serde(rename = "type")]
    pub kind: GradingType,
    pub s_case: Option<SCase>,
    #[serde(rename = "I_plus")]
    pub plus: IndexSetDescriptor,
    #[serde(rename = "I_minus")]
    pub minus: IndexSetDescriptor,
    #[serde(rename = "J")]
    pub moved: IndexSetDescriptor,
    pub canonical: bool,
}

/// Bases of `L ∩ E(+1)` and `L ∩ E(-1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousGenerators<S: Scalar> {
    pub plus: Vec<Element<S>>,
    pub minus: Vec<Element<S>>,
}

/// `E_φ = E_{0,φ} ⊕ E_{1,φ}` for a verified involution `φ`.
#[derive(Debug, Clone)]
pub struct Grading<S: Scalar> {
    phi: Endomorphism<S>,
    family: InvariantFamily<S>,
    construction: Option<Construction<S>>,
    report: OnceLock<ClassificationReport>,
}

impl<S: Scalar> Grading<S> {
    /// Builds the grading of an order-2 automorphism. Unverified maps are
    /// checked against the Grassmann relations first.
    pub fn from_involution(phi: Endomorphism<S>) -> Result<Self> {
        let phi = if phi.is_verified() {
            phi
        } else {
            phi.verify_relations()?
        };
        let family = phi.invariant_family()?;
        Ok(Self {
            phi,
            family,
            construction: None,
            report: OnceLock::new(),
        })
    }

    pub(crate) fn with_construction(mut self, c: Construction<S>) -> Self {
        self.construction = Some(c);
        self
    }

    pub fn phi(&self) -> &Endomorphism<S> {
        &self.phi
    }

    pub fn invariants(&self) -> &InvariantFamily<S> {
        &self.family
    }

    pub fn truncation(&self) -> Truncation {
        self.phi.truncation()
    }

    pub fn construction(&self) -> Option<&Construction<S>> {
        self.construction.as_ref()
    }

    pub fn model_tag(&self) -> Option<HomogeneousModel> {
        match &self.construction {
            Some(Construction::Homogeneous(m)) => Some(*m),
            _ => None,
        }
    }

    fn phi_of(&self, a: &Element<S>) -> Element<S> {
        substitute(self.truncation(), self.phi.images(), a)
    }

    /// `(a + φ(a)) / 2` for the even part, `(a - φ(a)) / 2` for the odd part.
    pub fn project(&self, a: &Element<S>, parity: Parity) -> Result<Element<S>> {
        self.truncation().ensure_same(a.truncation())?;
        Ok(self.project_unchecked(a, parity))
    }

    fn project_unchecked(&self, a: &Element<S>, parity: Parity) -> Element<S> {
        let image = self.phi_of(a);
        let sum = match parity {
            Parity::Even => a + &image,
            Parity::Odd => a - &image,
        };
        sum.scale(&S::half())
    }

    /// Whether `a` lies in the given component (zero lies in both).
    pub fn lies_in(&self, a: &Element<S>, parity: Parity) -> Result<bool> {
        self.truncation().ensure_same(a.truncation())?;
        let image = self.phi_of(a);
        Ok(match parity {
            Parity::Even => image == *a,
            Parity::Odd => image == -a,
        })
    }

    pub fn degree_of(&self, a: &Element<S>) -> Result<Degree> {
        self.truncation().ensure_same(a.truncation())?;
        let image = self.phi_of(a);
        Ok(if image == *a {
            Degree::Even
        } else if image == -a {
            Degree::Odd
        } else {
            Degree::Mixed
        })
    }

    /// A linearly independent spanning set of the projection of the
    /// length-`<= max_len` filtration onto one component.
    ///
    /// Basis monomials are projected shortest first (lexicographic within a
    /// length) and a projection is kept when it is independent of those
    /// already kept.
    pub fn homogeneous_spanning_set(&self, parity: Parity, max_len: usize) -> Result<Vec<Element<S>>> {
        let n = self.truncation();
        if max_len > n.get() {
            return Err(Error::InvalidArgument(format!(
                "max_len {max_len} exceeds the truncation {}",
                n.get()
            )));
        }
        let mut basis = EchelonBasis::new();
        let mut kept = Vec::new();
        for m in n.monomials_up_to(max_len) {
            let v = self.project_unchecked(&Element::monomial(n, m, S::one())?, parity);
            if basis.insert(coordinates(&v)) {
                kept.push(v);
            }
        }
        Ok(kept)
    }

    /// Every `a_i` lies in the odd-length span, including the tail pattern.
    pub fn is_canonical_type(&self) -> bool {
        self.family.tail_is_odd() && self.family.all().iter().all(|a| a.even_part().is_zero())
    }

    pub fn classify_in_basis(&self) -> &ClassificationReport {
        self.report.get_or_init(|| self.compute_report())
    }

    fn compute_report(&self) -> ClassificationReport {
        let n = self.truncation();
        let mut plus = BTreeSet::new();
        let mut minus = BTreeSet::new();
        let mut moved = BTreeSet::new();
        for (i, img) in self.phi.images().iter().enumerate() {
            let e = Element::generator(n, i + 1).expect("index in range");
            if *img == e {
                plus.insert(i + 1);
            } else if *img == -&e {
                minus.insert(i + 1);
            } else {
                moved.insert(i + 1);
            }
        }
        let tail = self.phi.tail();
        let tail_has =
            |action: TailAction| tail.action_for_parity(true) == action || tail.action_for_parity(false) == action;
        let plus = IndexSetDescriptor {
            explicit_part: plus,
            tail_membership: tail_has(TailAction::Fixed),
        };
        let minus = IndexSetDescriptor {
            explicit_part: minus,
            tail_membership: tail_has(TailAction::Negated),
        };
        let moved = IndexSetDescriptor {
            explicit_part: moved,
            tail_membership: tail_has(TailAction::Moved),
        };
        let i_infinite = plus.is_infinite() || minus.is_infinite();
        let i_empty = plus.is_empty() && minus.is_empty();
        let kind = if moved.is_empty() {
            GradingType::One
        } else if i_empty {
            GradingType::EmptyInBasis
        } else if i_infinite {
            GradingType::Two
        } else {
            GradingType::Three
        };
        let s_case =
            (kind == GradingType::Two).then(
                || match (plus.is_infinite(), minus.is_infinite(), moved.is_infinite()) {
                    (true, true, _) => SCase::S1,
                    (true, false, false) => SCase::S2,
                    (true, false, true) => SCase::S3,
                    (false, true, false) => SCase::S4,
                    (false, true, true) => SCase::S5,
                    (false, false, _) => unreachable!("type 2 has an infinite eigen-index set"),
                },
            );
        ClassificationReport {
            kind,
            s_case,
            plus,
            minus,
            moved,
            canonical: self.is_canonical_type(),
        }
    }

    /// Solves `φ(v) = ±v` exactly for `v` in the span of the generators.
    /// The whole image of `v` must match, not only its linear part.
    pub fn find_homogeneous_generators(&self) -> HomogeneousGenerators<S> {
        let n = self.truncation();
        let width = n.get();
        let solve = |sign: S| -> Vec<Element<S>> {
            let mut rows: BTreeMap<Monomial, Vec<S>> = BTreeMap::new();
            for (i, img) in self.phi.images().iter().enumerate() {
                for (m, c) in img.terms() {
                    rows.entry(*m).or_insert_with(|| vec![S::zero(); width])[i] = c.clone();
                }
                let g = Monomial::generator(i + 1).expect("index in range");
                let row = rows.entry(g).or_insert_with(|| vec![S::zero(); width]);
                row[i] = row[i].clone() - sign.clone();
            }
            linalg::null_space(rows.into_values().collect(), width)
                .into_iter()
                .map(|coeffs| {
                    let terms = coeffs
                        .into_iter()
                        .enumerate()
                        .map(|(i, c)| (Monomial::generator(i + 1).expect("index in range"), c));
                    Element::from_terms(n, terms).expect("generators lie in the truncation")
                })
                .collect()
        };
        HomogeneousGenerators {
            plus: solve(S::one()),
            minus: solve(-S::one()),
        }
    }
}

/// Whether a family of elements is linearly independent.
pub fn check_independent<S: Scalar>(vs: &[Element<S>]) -> bool {
    linalg::is_independent(vs)
}
