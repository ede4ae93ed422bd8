//! Graded homomorphisms between gradings of the same `E_N`, and explicit
//! equivalence certificates to the homogeneous models.

use std::collections::BTreeMap;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::constructors::{self, Construction, HomogeneousModel};
use crate::error::Result;
use crate::exterior::{Element, Monomial, Truncation};
use crate::grading::{Grading, Parity};
use crate::linmap::{check_anticommuting, substitute, TailRule};
use crate::scalar::Scalar;

/// An algebra map `source -> target` fixed by the images of `e_1..e_N`.
#[derive(Debug, Clone)]
pub struct GradedMap<S: Scalar> {
    source: Grading<S>,
    target: Grading<S>,
    images: Vec<Element<S>>,
}

impl<S: Scalar> GradedMap<S> {
    /// Generators missing from `images` are sent to themselves.
    pub fn new(source: Grading<S>, target: Grading<S>, images: BTreeMap<usize, Element<S>>) -> Result<Self> {
        let n = source.truncation();
        n.ensure_same(target.truncation())?;
        for (&i, img) in &images {
            n.check_index(i)?;
            n.ensure_same(img.truncation())?;
        }
        let images = (1..=n.get())
            .map(|i| match images.get(&i) {
                Some(img) => Ok(img.clone()),
                None => Element::generator(n, i),
            })
            .collect::<Result<Vec<_>>>()?;
        check_anticommuting(&images)?;
        Ok(Self { source, target, images })
    }

    pub fn identity(g: Grading<S>) -> Self {
        Self::new(g.clone(), g, BTreeMap::new()).expect("generators anticommute")
    }

    pub fn source(&self) -> &Grading<S> {
        &self.source
    }

    pub fn target(&self) -> &Grading<S> {
        &self.target
    }

    pub fn truncation(&self) -> Truncation {
        self.source.truncation()
    }

    pub fn images(&self) -> &[Element<S>] {
        &self.images
    }

    pub fn apply(&self, a: &Element<S>) -> Result<Element<S>> {
        self.truncation().ensure_same(a.truncation())?;
        Ok(substitute(self.truncation(), &self.images, a))
    }

    /// Every homogeneous spanning vector of the source (all lengths) lands
    /// in the component of the same parity in the target.
    pub fn preserves_degree(&self) -> bool {
        let n = self.truncation();
        [Parity::Even, Parity::Odd].into_iter().all(|p| {
            let span = self
                .source
                .homogeneous_spanning_set(p, n.get())
                .expect("max_len equals the truncation");
            span.iter().all(|v| {
                let image = substitute(n, &self.images, v);
                self.target.lies_in(&image, p).expect("same truncation")
            })
        })
    }
}

/// `f: A -> B` and `g: B -> A` preserve degrees and are mutually inverse on
/// the generators.
pub fn is_graded_iso<S: Scalar>(f: &GradedMap<S>, g: &GradedMap<S>) -> bool {
    let n = f.truncation();
    if n != g.truncation() || f.source.phi() != g.target.phi() || f.target.phi() != g.source.phi() {
        return false;
    }
    let round_trip =
        |outer: &GradedMap<S>, inner: &GradedMap<S>| {
            inner.images.iter().enumerate().all(|(i, img)| {
                substitute(n, &outer.images, img) == Element::generator(n, i + 1).expect("index in range")
            })
        };
    round_trip(g, f) && round_trip(f, g) && f.preserves_degree() && g.preserves_degree()
}

/// `f: model -> grading` and its inverse `g`.
#[derive(Debug, Clone)]
pub struct Certificate<S: Scalar> {
    pub model: HomogeneousModel,
    pub f: GradedMap<S>,
    pub g: GradedMap<S>,
    pub verified: bool,
}

struct Images<'a, S>(&'a [Element<S>]);

impl<S: Scalar> Serialize for Images<'_, S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut outer = s.serialize_map(Some(1))?;
        let images: BTreeMap<String, &Element<S>> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, e)| ((i + 1).to_string(), e))
            .collect();
        outer.serialize_entry("images", &images)?;
        outer.end()
    }
}

impl<S: Scalar> Serialize for Certificate<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("model", &self.model)?;
        m.serialize_entry("f", &Images(&self.f.images))?;
        m.serialize_entry("g", &Images(&self.g.images))?;
        m.serialize_entry("verified", &self.verified)?;
        m.end()
    }
}

/// Equivalence to a homogeneous model for gradings built by the
/// constructors. Gradings without construction metadata give `None`.
pub fn standard_equivalence<S: Scalar>(grading: &Grading<S>) -> Result<Option<Certificate<S>>> {
    let n = grading.truncation();
    let (model, f_images, g_images) = match grading.construction() {
        None => return Ok(None),
        Some(Construction::Homogeneous(m)) => (*m, BTreeMap::new(), BTreeMap::new()),
        Some(Construction::Method2 { k, t }) => {
            let prefix = Element::monomial(n, Monomial::prefix(k + t), S::one())?;
            let mut f = BTreeMap::new();
            let mut g = BTreeMap::new();
            for i in k + t + 1..=n.get() {
                let e = Element::generator(n, i)?;
                let shift = &prefix * &e;
                f.insert(i, &e - &shift);
                g.insert(i, &e + &shift);
            }
            (HomogeneousModel::Ek(*k), f, g)
        }
        Some(c) => {
            let (spec, tail) = c.as_method1().expect("remaining constructions are method 1");
            method1_certificate(n, &spec, tail)?
        }
    };
    let model = model.normalized();
    let model_grading = constructors::homogeneous(model, n)?;
    let f = GradedMap::new(model_grading.clone(), grading.clone(), f_images)?;
    let g = GradedMap::new(grading.clone(), model_grading, g_images)?;
    let verified = is_graded_iso(&f, &g);
    Ok(Some(Certificate { model, f, g, verified }))
}

type ImageMap<S> = BTreeMap<usize, Element<S>>;

/// Odd generators of the model are matched with `J ∪ I-` and even ones with
/// `I+`, each side in increasing order. `f(e_i) = e_j - d_j` on `J` and
/// `e_j` elsewhere, where `j` is the generator matched with `i`.
fn method1_certificate<S: Scalar>(
    n: Truncation,
    spec: &constructors::Method1Spec<S>,
    tail: TailRule,
) -> Result<(HomogeneousModel, ImageMap<S>, ImageMap<S>)> {
    let tail_odd = tail == TailRule::Negation;
    let (odd, even): (Vec<usize>, Vec<usize>) = (1..=n.get())
        .partition(|i| spec.shifts.contains_key(i) || spec.minus.contains(i) || (tail_odd && !spec.plus.contains(i)));
    let (model, order) = if tail_odd {
        (HomogeneousModel::Ek(even.len()), [even, odd].concat())
    } else {
        (HomogeneousModel::EkStar(odd.len()), [odd, even].concat())
    };
    // relabel: actual index order[i] -> model index i + 1
    let mut back = vec![Element::zero(n); n.get()];
    for (i, &j) in order.iter().enumerate() {
        back[j - 1] = Element::generator(n, i + 1)?;
    }
    let mut f = BTreeMap::new();
    let mut g = BTreeMap::new();
    for (i, &j) in order.iter().enumerate() {
        let e = Element::generator(n, j)?;
        let d = spec.shifts.get(&j).cloned().unwrap_or_else(|| Element::zero(n));
        f.insert(i + 1, &e - &d);
        g.insert(j, substitute(n, &back, &(&e + &d)));
    }
    Ok((model, f, g))
}
