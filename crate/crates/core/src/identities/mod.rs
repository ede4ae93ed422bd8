//! Polynomials in the free superalgebra on even (`y`), odd (`z`) and
//! ungraded (`x`) variables, and identity checking against a grading.

mod check;
mod parse;

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exterior::{Element, Truncation};
use crate::grading::{Grading, Parity};
use crate::scalar::Scalar;

pub use check::{inclusion_evidence, is_identity, CheckOptions, InclusionReport, Mode, Parameters, Verdict, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    /// Even variables.
    Y,
    /// Odd variables.
    Z,
    /// Ungraded variables.
    X,
}

impl Sort {
    pub fn parity(self) -> Option<Parity> {
        match self {
            Sort::Y => Some(Parity::Even),
            Sort::Z => Some(Parity::Odd),
            Sort::X => None,
        }
    }

    fn letter(self) -> char {
        match self {
            Sort::Y => 'y',
            Sort::Z => 'z',
            Sort::X => 'x',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    pub sort: Sort,
    pub index: u32,
}

impl Variable {
    pub fn y(index: u32) -> Self {
        Self { sort: Sort::Y, index }
    }

    pub fn z(index: u32) -> Self {
        Self { sort: Sort::Z, index }
    }

    pub fn x(index: u32) -> Self {
        Self { sort: Sort::X, index }
    }

    pub fn of_parity(p: Parity, index: u32) -> Self {
        match p {
            Parity::Even => Self::y(index),
            Parity::Odd => Self::z(index),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.sort.letter(), self.index)
    }
}

impl std::str::FromStr for Variable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a variable: {s:?}"));
        let mut chars = s.chars();
        let sort = match chars.next() {
            Some('y') => Sort::Y,
            Some('z') => Sort::Z,
            Some('x') => Sort::X,
            _ => return Err(bad()),
        };
        let digits = chars.as_str();
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u32 = digits.parse().map_err(|_| bad())?;
        if index == 0 {
            return Err(bad());
        }
        Ok(Self { sort, index })
    }
}

impl Serialize for Variable {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Variable {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

pub type Word = Vec<Variable>;

/// A finite linear combination of words, with no zero coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct SuperPolynomial<S: Scalar> {
    terms: BTreeMap<Word, S>,
}

impl<S: Scalar> SuperPolynomial<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn word(word: Word) -> Self {
        Self::from_terms([(word, S::one())])
    }

    pub fn variable(v: Variable) -> Self {
        Self::word(vec![v])
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, S)>>(terms: I) -> Self {
        let mut out = Self::zero();
        for (w, c) in terms {
            out.add_term(w, c);
        }
        out
    }

    fn add_term(&mut self, w: Word, c: S) {
        match self.terms.entry(w) {
            Entry::Occupied(mut slot) => {
                let sum = slot.get().clone() + c;
                if sum.is_zero() {
                    slot.remove();
                } else {
                    *slot.get_mut() = sum;
                }
            }
            Entry::Vacant(slot) => {
                if !c.is_zero() {
                    slot.insert(c);
                }
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, S> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::from_terms(self.terms.iter().map(|(w, v)| (w.clone(), v.clone() * c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term([a.as_slice(), b.as_slice()].concat(), ca.clone() * cb.clone());
            }
        }
        out
    }

    /// `ab - ba`
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `[[a_1, a_2], ..., a_k]`
    pub fn left_normed(parts: &[Self]) -> Result<Self> {
        match parts {
            [first, rest @ ..] if !rest.is_empty() => Ok(rest.iter().fold(first.clone(), |acc, p| acc.commutator(p))),
            _ => Err(Error::InvalidArgument(
                "a commutator needs at least two arguments".into(),
            )),
        }
    }

    pub fn variables(&self) -> BTreeSet<Variable> {
        self.terms.keys().flatten().copied().collect()
    }

    pub fn max_word_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    /// Each word uses every variable of the polynomial exactly once.
    pub fn is_multilinear(&self) -> bool {
        let vars = self.variables();
        self.terms
            .keys()
            .all(|w| w.len() == vars.len() && w.iter().collect::<BTreeSet<_>>().len() == w.len())
    }

    /// Splits into multihomogeneous components and fully polarizes each
    /// repeated variable. Copies of a variable keep its sort; the first copy
    /// keeps its index and the others take fresh indices above the largest
    /// index of that sort. Components that vanish are dropped.
    pub fn multilinearize(&self) -> Vec<Self> {
        let mut components: BTreeMap<BTreeMap<Variable, usize>, Self> = BTreeMap::new();
        for (w, c) in &self.terms {
            let mut degree = BTreeMap::new();
            for v in w {
                *degree.entry(*v).or_insert(0) += 1;
            }
            components
                .entry(degree)
                .or_insert_with(Self::zero)
                .add_term(w.clone(), c.clone());
        }
        let mut next_index: BTreeMap<Sort, u32> = BTreeMap::new();
        for v in self.variables() {
            let e = next_index.entry(v.sort).or_insert(0);
            *e = (*e).max(v.index);
        }
        components
            .into_iter()
            .map(|(degree, comp)| {
                let mut next = next_index.clone();
                let copies: BTreeMap<Variable, Vec<Variable>> = degree
                    .iter()
                    .map(|(&v, &d)| {
                        let mut list = vec![v];
                        for _ in 1..d {
                            let idx = next.get_mut(&v.sort).expect("sort seen");
                            *idx += 1;
                            list.push(Variable {
                                sort: v.sort,
                                index: *idx,
                            });
                        }
                        (v, list)
                    })
                    .collect();
                polarize(&comp, &copies)
            })
            .filter(|p| !p.is_zero())
            .collect()
    }

    /// Sum of slot parities over each word, when every word agrees.
    pub fn parity(&self) -> Option<Parity> {
        let mut parities = self.terms.keys().map(|w| {
            w.iter()
                .map(|v| v.sort.parity())
                .try_fold(Parity::Even, |acc, p| p.map(|p| acc + p))
        });
        let first = parities.next()??;
        parities.all(|p| p == Some(first)).then_some(first)
    }

    /// Evaluates the polynomial. With a grading, `y` values must be even and
    /// `z` values odd in it.
    pub fn evaluate(
        &self,
        n: Truncation,
        assignment: &BTreeMap<Variable, Element<S>>,
        grading: Option<&Grading<S>>,
    ) -> Result<Element<S>> {
        for v in self.variables() {
            let value = assignment
                .get(&v)
                .ok_or_else(|| Error::MissingAssignment(v.to_string()))?;
            n.ensure_same(value.truncation())?;
            if let (Some(g), Some(p)) = (grading, v.sort.parity()) {
                if !g.lies_in(value, p)? {
                    return Err(Error::ParityMismatch {
                        variable: v.to_string(),
                        expected: p.bit(),
                    });
                }
            }
        }
        let mut total = Element::zero(n);
        for (w, c) in &self.terms {
            let mut prod = Element::constant(n, c.clone());
            for v in w {
                prod = &prod * &assignment[v];
                if prod.is_zero() {
                    break;
                }
            }
            total = &total + &prod;
        }
        Ok(total)
    }
}

/// Replaces the occurrences of each repeated variable by every ordering of
/// its copies.
fn polarize<S: Scalar>(p: &SuperPolynomial<S>, copies: &BTreeMap<Variable, Vec<Variable>>) -> SuperPolynomial<S> {
    let mut out = SuperPolynomial::zero();
    for (w, c) in p.terms() {
        let mut words = vec![w.clone()];
        for (v, list) in copies {
            if list.len() < 2 {
                continue;
            }
            let positions: Vec<usize> = w.iter().enumerate().filter(|(_, x)| *x == v).map(|(i, _)| i).collect();
            let mut expanded = Vec::new();
            for base in &words {
                for perm in permutations(list.len()) {
                    let mut nw = base.clone();
                    for (slot, &pos) in positions.iter().enumerate() {
                        nw[pos] = list[perm[slot]];
                    }
                    expanded.push(nw);
                }
            }
            words = expanded;
        }
        for nw in words {
            out.add_term(nw, c.clone());
        }
    }
    out
}

/// All permutations of `0..k` in lexicographic order.
pub(crate) fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let x = rest.remove(i);
            cur.push(x);
            go(rest, cur, out);
            cur.pop();
            rest.insert(i, x);
        }
    }
    let mut out = Vec::new();
    go(&mut (0..k).collect(), &mut Vec::new(), &mut out);
    out
}

fn sign_of(perm: &[usize]) -> i64 {
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `z1 z2 ... zm`
pub fn product_identity<S: Scalar>(m: usize) -> Result<SuperPolynomial<S>> {
    if m == 0 {
        return Err(Error::InvalidArgument("product identity needs m >= 1".into()));
    }
    Ok(SuperPolynomial::word((1..=m as u32).map(Variable::z).collect()))
}

/// `[[v1, v2], v3]` with slot `i` even (`y_i`) or odd (`z_i`).
pub fn graded_triple_commutator<S: Scalar>(parities: [Parity; 3]) -> SuperPolynomial<S> {
    let vars: Vec<_> = parities
        .iter()
        .zip(1..)
        .map(|(&p, i)| SuperPolynomial::variable(Variable::of_parity(p, i)))
        .collect();
    SuperPolynomial::left_normed(&vars).expect("three arguments")
}

/// All eight parity patterns of the triple commutator.
pub fn triple_commutator_patterns<S: Scalar>() -> Vec<SuperPolynomial<S>> {
    (0..8u8)
        .map(|bits| {
            let p = |i: u8| Parity::from_bit(bits >> (2 - i) & 1);
            graded_triple_commutator([p(0), p(1), p(2)])
        })
        .collect()
}

/// `[[x1, x2], x3]`
pub fn triple_commutator<S: Scalar>() -> SuperPolynomial<S> {
    let vars: Vec<_> = (1..=3).map(|i| SuperPolynomial::variable(Variable::x(i))).collect();
    SuperPolynomial::left_normed(&vars).expect("three arguments")
}

/// `s_n = Σ sgn(σ) x_σ(1) ... x_σ(n)`
pub fn standard_polynomial<S: Scalar>(n: usize) -> Result<SuperPolynomial<S>> {
    if n < 2 {
        return Err(Error::InvalidArgument("standard polynomial needs n >= 2".into()));
    }
    Ok(SuperPolynomial::from_terms(permutations(n).into_iter().map(|perm| {
        let word = perm.iter().map(|&i| Variable::x(i as u32 + 1)).collect();
        (word, S::from_int(sign_of(&perm)))
    })))
}

impl<S: Scalar> fmt::Display for SuperPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let mag = c.abs();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let words: Vec<String> = w.iter().map(Variable::to_string).collect();
            if w.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&words.join(" "))?;
            } else {
                write!(f, "{mag} * {}", words.join(" "))?;
            }
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for SuperPolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SuperPolynomial({self})")
    }
}

impl<S: Scalar> std::str::FromStr for SuperPolynomial<S> {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse::parse(s)
    }
}

impl<S: Scalar> Serialize for SuperPolynomial<S> {
    fn serialize<Se: Serializer>(&self, s: Se) -> std::result::Result<Se::Ok, Se::Error> {
        s.collect_str(self)
    }
}

impl<'de, S: Scalar> Deserialize<'de> for SuperPolynomial<S> {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}
