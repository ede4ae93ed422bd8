use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::monomial::{Monomial, Truncation};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A sparse exact linear combination of basis monomials of `E_N`.
///
/// Terms are kept sorted by the lexicographic monomial order with no zero
/// coefficients, so structural equality is algebraic equality.
#[derive(Clone, PartialEq, Eq)]
pub struct Element<S> {
    n: Truncation,
    terms: Vec<(Monomial, S)>,
}

/// Sorts, merges and prunes a raw term list.
fn normalize<S: Scalar>(mut raw: Vec<(Monomial, S)>) -> Vec<(Monomial, S)> {
    raw.sort_unstable_by_key(|t| t.0);
    let mut out: Vec<(Monomial, S)> = Vec::with_capacity(raw.len());
    for (m, c) in raw {
        match out.last_mut() {
            Some((last, acc)) if *last == m => {
                *acc = acc.clone() + c;
            }
            _ => {
                if let Some((_, acc)) = out.last() {
                    if acc.is_zero() {
                        out.pop();
                    }
                }
                out.push((m, c));
            }
        }
    }
    if out.last().is_some_and(|(_, c)| c.is_zero()) {
        out.pop();
    }
    out
}

impl<S: Scalar> Element<S> {
    pub fn zero(n: Truncation) -> Self {
        Self { n, terms: Vec::new() }
    }

    pub fn one(n: Truncation) -> Self {
        Self::constant(n, S::one())
    }

    pub fn constant(n: Truncation, c: S) -> Self {
        Self::from_monomial_unchecked(n, Monomial::ONE, c)
    }

    /// The generator `e_index`.
    pub fn generator(n: Truncation, index: usize) -> Result<Self> {
        n.check_index(index)?;
        Ok(Self::from_monomial_unchecked(n, Monomial::generator(index)?, S::one()))
    }

    pub fn monomial(n: Truncation, m: Monomial, c: S) -> Result<Self> {
        if !n.contains(m) {
            let index = m.max_index().unwrap_or(0);
            return Err(Error::IndexOutOfRange { index, n: n.get() });
        }
        Ok(Self::from_monomial_unchecked(n, m, c))
    }

    fn from_monomial_unchecked(n: Truncation, m: Monomial, c: S) -> Self {
        let terms = if c.is_zero() { Vec::new() } else { vec![(m, c)] };
        Self { n, terms }
    }

    /// Product of generators given by strictly increasing indices.
    pub fn from_indices(n: Truncation, indices: &[usize], c: S) -> Result<Self> {
        Self::monomial(n, Monomial::from_indices(indices)?, c)
    }

    pub fn from_terms<I>(n: Truncation, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Monomial, S)>,
    {
        let raw: Vec<_> = terms.into_iter().collect();
        for (m, _) in &raw {
            if !n.contains(*m) {
                let index = m.max_index().unwrap_or(0);
                return Err(Error::IndexOutOfRange { index, n: n.get() });
            }
        }
        Ok(Self {
            n,
            terms: normalize(raw),
        })
    }

    pub(crate) fn from_terms_unchecked(n: Truncation, raw: Vec<(Monomial, S)>) -> Self {
        Self {
            n,
            terms: normalize(raw),
        }
    }

    pub fn truncation(&self) -> Truncation {
        self.n
    }

    pub fn terms(&self) -> &[(Monomial, S)] {
        &self.terms
    }

    pub fn coeff(&self, m: Monomial) -> S {
        self.terms
            .binary_search_by(|(x, _)| x.cmp(&m))
            .map(|i| self.terms[i].1.clone())
            .unwrap_or_else(|_| S::zero())
    }

    pub fn constant_term(&self) -> S {
        self.coeff(Monomial::ONE)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.n.ensure_same(other.n)?;
        let raw = self.terms.iter().chain(&other.terms).cloned().collect();
        Ok(Self::from_terms_unchecked(self.n, raw))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.n.ensure_same(other.n)?;
        let raw = self
            .terms
            .iter()
            .cloned()
            .chain(other.terms.iter().map(|(m, c)| (*m, -c.clone())))
            .collect();
        Ok(Self::from_terms_unchecked(self.n, raw))
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.n.ensure_same(other.n)?;
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((negative, m)) = ma.times(*mb) {
                    let c = ca.clone() * cb.clone();
                    raw.push((m, if negative { -c } else { c }));
                }
            }
        }
        Ok(Self::from_terms_unchecked(self.n, raw))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(m, x)| (*m, x.clone() * c.clone())).collect(),
        }
    }

    /// `ab - ba`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.checked_mul(other)?.checked_sub(&other.checked_mul(self)?)
    }

    /// Left-normed commutator `[[x1, x2], x3], ...`.
    pub fn left_normed(xs: &[Self]) -> Result<Self> {
        let (first, rest) = match xs {
            [first, rest @ ..] if !rest.is_empty() => (first, rest),
            _ => {
                return Err(Error::InvalidArgument(
                    "a commutator needs at least two arguments".into(),
                ))
            }
        };
        rest.iter().try_fold(first.clone(), |acc, x| acc.commutator(x))
    }

    fn filter(&self, keep: impl Fn(Monomial) -> bool) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().filter(|(m, _)| keep(*m)).cloned().collect(),
        }
    }

    /// Split into the span of even-length and odd-length monomials.
    pub fn parity_split(&self) -> (Self, Self) {
        (self.even_part(), self.odd_part())
    }

    pub fn even_part(&self) -> Self {
        self.filter(Monomial::is_even)
    }

    pub fn odd_part(&self) -> Self {
        self.filter(|m| !m.is_even())
    }

    /// Terms whose monomial has exactly `len` factors.
    pub fn degree_part(&self, len: usize) -> Self {
        self.filter(|m| m.len() == len)
    }

    /// Canonical parity: `Some(0)` or `Some(1)` when only even- or only
    /// odd-length monomials occur; zero counts as both and reports `Some(0)`.
    pub fn parity(&self) -> Option<u8> {
        let even = self.terms.iter().any(|(m, _)| m.is_even());
        let odd = self.terms.iter().any(|(m, _)| !m.is_even());
        match (even, odd) {
            (_, false) => Some(0),
            (false, true) => Some(1),
            (true, true) => None,
        }
    }

    pub fn min_len(&self) -> Option<usize> {
        self.terms.iter().map(|(m, _)| m.len()).min()
    }

    pub fn max_len(&self) -> Option<usize> {
        self.terms.iter().map(|(m, _)| m.len()).max()
    }

    pub fn support_mask(&self) -> u64 {
        self.terms.iter().fold(0, |acc, (m, _)| acc | m.bits())
    }

    /// Generators occurring in some monomial with nonzero coefficient.
    pub fn support(&self) -> BTreeSet<usize> {
        Monomial::from_bits(self.support_mask()).indices().collect()
    }

    /// Text form parser, e.g. `-e1 + 2e2e3e4 - 1/2*e5 + 3`.
    pub fn parse(n: Truncation, text: &str) -> Result<Self> {
        parse_element(n, text)
    }
}

impl<S: Scalar> Add for &Element<S> {
    type Output = Element<S>;

    /// Panics on a truncation mismatch; see [`Element::checked_add`].
    fn add(self, rhs: Self) -> Element<S> {
        self.checked_add(rhs).expect("truncation mismatch in add")
    }
}

impl<S: Scalar> Sub for &Element<S> {
    type Output = Element<S>;

    fn sub(self, rhs: Self) -> Element<S> {
        self.checked_sub(rhs).expect("truncation mismatch in sub")
    }
}

impl<S: Scalar> Mul for &Element<S> {
    type Output = Element<S>;

    fn mul(self, rhs: Self) -> Element<S> {
        self.checked_mul(rhs).expect("truncation mismatch in mul")
    }
}

impl<S: Scalar> Neg for &Element<S> {
    type Output = Element<S>;

    fn neg(self) -> Element<S> {
        Element {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl<S: Scalar> Neg for Element<S> {
    type Output = Element<S>;

    fn neg(self) -> Element<S> {
        -&self
    }
}

impl<S: Scalar> fmt::Display for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else if abs.is_integer() {
                write!(f, "{abs}{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Element<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[N={}]({self})", self.n.get())
    }
}

trait IsInteger {
    fn is_integer(&self) -> bool;
}

impl<S: Scalar> IsInteger for S {
    fn is_integer(&self) -> bool {
        // exact: an integer prints without a denominator
        !self.to_string().contains('/')
    }
}

fn parse_element<S: Scalar>(n: Truncation, text: &str) -> Result<Element<S>> {
    let text: String = text
        .chars()
        .map(|c| if c == '\u{2212}' { '-' } else { c })
        .filter(|c| !c.is_whitespace())
        .collect();
    if text.is_empty() {
        return Err(Error::Parse("empty element".into()));
    }
    let bytes = text.as_bytes();
    let mut raw = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let mut negative = false;
        if pos > 0 || bytes[0] == b'+' || bytes[0] == b'-' {
            match bytes[pos] {
                b'+' => {}
                b'-' => negative = true,
                _ => return Err(Error::Parse(format!("expected '+' or '-' in {text:?}"))),
            }
            pos += 1;
        }
        let end = text[pos..].find(['+', '-']).map_or(bytes.len(), |i| pos + i);
        let term = &text[pos..end];
        let (coef, mono) = split_term::<S>(term)?;
        let m = parse_monomial_word(mono)?;
        let c = if negative { -coef } else { coef };
        raw.push((m, c));
        pos = end;
    }
    Element::from_terms(n, raw)
}

fn split_term<S: Scalar>(term: &str) -> Result<(S, &str)> {
    let term = term.trim_start_matches('(');
    let split = term.find('e').unwrap_or(term.len());
    let (coef, mono) = term.split_at(split);
    let coef = coef.trim_end_matches('*').trim_end_matches(')');
    if coef.is_empty() {
        if mono.is_empty() {
            return Err(Error::Parse("empty term".into()));
        }
        return Ok((S::one(), mono));
    }
    let c = coef
        .parse::<S>()
        .map_err(|_| Error::Parse(format!("bad coefficient {coef:?}")))?;
    Ok((c, mono))
}

fn parse_monomial_word(word: &str) -> Result<Monomial> {
    if word.is_empty() || word == "1" {
        return Ok(Monomial::ONE);
    }
    let mut indices = Vec::new();
    for piece in word.split('e').skip(1) {
        let i = piece
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad monomial {word:?}")))?;
        indices.push(i);
    }
    if !word.starts_with('e') {
        return Err(Error::Parse(format!("bad monomial {word:?}")));
    }
    // words like e3e1 are accepted and reordered with their sign handled by the caller
    let mut sorted = indices.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted != indices {
        return Err(Error::Parse(format!(
            "monomial {word:?} must list strictly increasing indices"
        )));
    }
    Monomial::from_indices(&indices)
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    indices: Vec<usize>,
    coef: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ElementRepr {
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<TermRepr>,
}

impl<S: Scalar> Serialize for Element<S> {
    fn serialize<Se: Serializer>(&self, serializer: Se) -> std::result::Result<Se::Ok, Se::Error> {
        ElementRepr {
            n: self.n.get(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    indices: m.indices().collect(),
                    coef: c.to_string(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for Element<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = ElementRepr::deserialize(deserializer)?;
        let n = Truncation::new(repr.n).map_err(D::Error::custom)?;
        let mut raw = Vec::with_capacity(repr.terms.len());
        for t in repr.terms {
            let m = Monomial::from_indices(&t.indices).map_err(D::Error::custom)?;
            let c = t
                .coef
                .parse::<S>()
                .map_err(|_| D::Error::custom(format!("bad coefficient {:?}", t.coef)))?;
            raw.push((m, c));
        }
        Element::from_terms(n, raw).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::{BigRational, Ratio};

    type Q = BigRational;
    type E = Element<Q>;

    fn n(k: usize) -> Truncation {
        Truncation::new(k).unwrap()
    }

    fn el(k: usize, s: &str) -> E {
        E::parse(n(k), s).unwrap()
    }

    fn q(a: i64, b: i64) -> Q {
        Q::new(a.into(), b.into())
    }

    #[test]
    fn mul_examples() {
        assert_eq!(&el(5, "1 + e1") * &el(5, "e2"), el(5, "e2 + e1e2"));
        let s = el(5, "e1 + e2");
        assert!((&s * &s).is_zero());
        assert_eq!(&el(5, "-e1 + 2e2e3e4") * &el(5, "e5"), el(5, "-e1e5 + 2e2e3e4e5"));
    }

    #[test]
    fn additive_examples() {
        let e1 = el(3, "e1");
        assert!((&e1 + &(-&e1)).is_zero());
        assert_eq!((&e1 + &e1).scale(&q(1, 2)), e1);
        let e1e2 = el(3, "e1e2");
        let e2e1 = &el(3, "e2") * &el(3, "e1");
        assert_eq!(e2e1, -&e1e2);
        assert!((&e1e2 + &e2e1).is_zero());
    }

    #[test]
    fn commutator_examples() {
        let (a, b, c) = (el(4, "e1"), el(4, "e2"), el(4, "e3"));
        assert_eq!(a.commutator(&b).unwrap(), el(4, "2e1e2"));
        assert!(E::left_normed(&[a.clone(), b, c]).unwrap().is_zero());
        assert!(E::one(n(4)).commutator(&el(4, "e1 + e2e3 + 7")).unwrap().is_zero());
        assert!(E::left_normed(&[a]).is_err());
    }

    #[test]
    fn parity_and_support() {
        assert_eq!(el(3, "e1 + e1e2").parity_split(), (el(3, "e1e2"), el(3, "e1")));
        assert_eq!(E::one(n(3)).parity_split(), (E::one(n(3)), E::zero(n(3))));
        assert_eq!(el(3, "e1e2e3 + 5").parity_split(), (el(3, "5"), el(3, "e1e2e3")));
        assert_eq!(el(3, "e1e3 + e2").support(), [1, 2, 3].into());
        assert!(E::zero(n(3)).support().is_empty());
        assert!(el(3, "7").support().is_empty());
        assert_eq!(el(3, "e1 + e1e2").parity(), None);
        assert_eq!(el(3, "e1e2e3 - e2").parity(), Some(1));
    }

    #[test]
    fn truncation_mismatch_is_an_error() {
        let a = el(3, "e1");
        let b = el(4, "e1");
        assert_eq!(a.checked_mul(&b), Err(Error::TruncationMismatch { left: 3, right: 4 }));
        assert!(a.checked_add(&b).is_err());
        assert!(E::generator(n(3), 4).is_err());
    }

    #[test]
    fn text_round_trip() {
        for s in ["-e1 + 2e2e3e4", "-3 + 1/2*e3", "0", "e1e2 - 5/3*e1e2e3"] {
            let x = el(4, s);
            assert_eq!(x.to_string(), s);
            assert_eq!(el(4, &x.to_string()), x);
        }
        assert_eq!(el(4, "(1/2)e1 − e2"), el(4, "1/2*e1 - e2"));
        assert!(E::parse(n(4), "e2e1").is_err());
        assert!(E::parse(n(4), "e5").is_err());
        assert!(E::parse(n(4), "").is_err());
    }

    #[test]
    fn json_schema() {
        let x = el(4, "-1/2*e1 + e2e3");
        let json = serde_json::to_value(&x).unwrap();
        assert_eq!(
            json,
            serde_json::json!({"N": 4, "terms": [
                {"indices": [1], "coef": "-1/2"},
                {"indices": [2, 3], "coef": "1"}
            ]})
        );
        let back: E = serde_json::from_value(json).unwrap();
        assert_eq!(back, x);
        let bad = serde_json::json!({"N": 2, "terms": [{"indices": [3], "coef": "1"}]});
        assert!(serde_json::from_value::<E>(bad).is_err());
        let zero_pruned: E =
            serde_json::from_value(serde_json::json!({"N": 2, "terms": [{"indices": [1], "coef": "0"}]})).unwrap();
        assert!(zero_pruned.is_zero());
    }

    #[test]
    fn generic_over_machine_rationals() {
        let k = n(4);
        let a = Element::<Ratio<i64>>::parse(k, "e1 + 1/3*e2e3").unwrap();
        let b = Element::<Ratio<i64>>::parse(k, "e4 - e1").unwrap();
        assert_eq!((&a * &b).to_string(), "-1/3*e1e2e3 + e1e4 + 1/3*e2e3e4");
    }
}
