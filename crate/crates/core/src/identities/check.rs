//! Identity checking on the length filtration of a grading.
//!
//! Exhaustive mode multilinearizes and substitutes every tuple of
//! homogeneous spanning vectors. Slots are assigned in variable order and
//! the partially evaluated polynomial is simplified after each step, so a
//! subtree is skipped as soon as the remaining polynomial is zero.

use std::collections::BTreeMap;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{Sort, SuperPolynomial, Variable};
use crate::error::{Error, Result};
use crate::exterior::{Element, Monomial, Truncation};
use crate::grading::{Grading, Parity};
use crate::scalar::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    ExhaustiveMultilinear,
    Randomized,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOptions {
    pub max_len: usize,
    pub mode: Mode,
    /// Used by randomized mode only.
    pub seed: u64,
    pub trials: usize,
}

impl CheckOptions {
    pub fn exhaustive(max_len: usize) -> Self {
        Self {
            max_len,
            mode: Mode::ExhaustiveMultilinear,
            seed: 0,
            trials: 0,
        }
    }

    pub fn randomized(max_len: usize, seed: u64, trials: usize) -> Self {
        Self {
            max_len,
            mode: Mode::Randomized,
            seed,
            trials,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Parameters {
    #[serde(rename = "N")]
    pub n: usize,
    pub max_len: usize,
    pub trials: Option<usize>,
}

/// A substitution with a nonzero value. `polynomial` is the polynomial
/// that was evaluated, which in exhaustive mode is one multilinear
/// component of the input.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Witness<S: Scalar> {
    pub polynomial: SuperPolynomial<S>,
    pub assignment: BTreeMap<Variable, Element<S>>,
    pub value: Element<S>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct Verdict<S: Scalar> {
    pub holds: bool,
    pub witness: Option<Witness<S>>,
    pub mode: Mode,
    /// Only exhaustive verdicts settle the question for the filtration.
    pub authoritative: bool,
    pub parameters: Parameters,
    pub seed: Option<u64>,
    /// `max_len * (longest word) + 2 <= N`. Outside this bound products can
    /// vanish only because the truncation is too small.
    pub within_slack: bool,
    /// Complete substitutions evaluated. Tuples inside a subtree that was
    /// already known to vanish are not counted.
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(bound(serialize = "S: Scalar"))]
pub struct InclusionReport<S: Scalar> {
    pub all_hold: bool,
    pub verdicts: Vec<Verdict<S>>,
    pub polynomials: Vec<SuperPolynomial<S>>,
}

/// Substitution candidates per sort, computed on first use.
struct Pools<'a, S: Scalar> {
    grading: &'a Grading<S>,
    max_len: usize,
    even: Option<Vec<Element<S>>>,
    odd: Option<Vec<Element<S>>>,
    free: Option<Vec<Element<S>>>,
}

impl<'a, S: Scalar> Pools<'a, S> {
    fn new(grading: &'a Grading<S>, max_len: usize) -> Self {
        Self {
            grading,
            max_len,
            even: None,
            odd: None,
            free: None,
        }
    }

    fn get(&mut self, sort: Sort) -> &[Element<S>] {
        let (g, max_len) = (self.grading, self.max_len);
        let spanning = |p| g.homogeneous_spanning_set(p, max_len).expect("max_len checked");
        match sort {
            Sort::Y => self.even.get_or_insert_with(|| spanning(Parity::Even)),
            Sort::Z => self.odd.get_or_insert_with(|| spanning(Parity::Odd)),
            Sort::X => self.free.get_or_insert_with(|| {
                let n = g.truncation();
                n.monomials_up_to(max_len)
                    .into_iter()
                    .map(|m| Element::monomial(n, m, S::one()).expect("monomial in range"))
                    .collect()
            }),
        }
    }
}

pub fn is_identity<S: Scalar>(p: &SuperPolynomial<S>, g: &Grading<S>, opts: &CheckOptions) -> Result<Verdict<S>> {
    let n = g.truncation();
    if opts.max_len > n.get() {
        return Err(Error::InvalidArgument(format!(
            "max_len {} exceeds the truncation {}",
            opts.max_len,
            n.get()
        )));
    }
    let mut pools = Pools::new(g, opts.max_len);
    let (witness, evaluations) = match opts.mode {
        Mode::ExhaustiveMultilinear => {
            let mut evaluations = 0;
            let mut found = None;
            for comp in p.multilinearize() {
                let (w, count) = search(&comp, n, &mut pools);
                evaluations += count;
                if w.is_some() {
                    found = w;
                    break;
                }
            }
            (found, evaluations)
        }
        Mode::Randomized => random_search(p, n, &mut pools, opts.seed, opts.trials),
    };
    let randomized = opts.mode == Mode::Randomized;
    Ok(Verdict {
        holds: witness.is_none(),
        witness,
        mode: opts.mode,
        authoritative: !randomized,
        parameters: Parameters {
            n: n.get(),
            max_len: opts.max_len,
            trials: randomized.then_some(opts.trials),
        },
        seed: randomized.then_some(opts.seed),
        within_slack: opts.max_len * p.max_word_len() + 2 <= n.get(),
        evaluations,
    })
}

/// Runs [`is_identity`] for each generator. All holding is evidence that
/// the T2-ideal they generate lies inside that of `g`, at this truncation.
pub fn inclusion_evidence<S: Scalar>(
    generators: &[SuperPolynomial<S>],
    g: &Grading<S>,
    opts: &CheckOptions,
) -> Result<InclusionReport<S>> {
    let verdicts = generators
        .iter()
        .map(|p| is_identity(p, g, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(InclusionReport {
        all_hold: verdicts.iter().all(|v| v.holds),
        verdicts,
        polynomials: generators.to_vec(),
    })
}

#[derive(Clone)]
enum Seg<S: Scalar> {
    Const(Element<S>),
    Var(usize),
}

#[derive(Clone)]
struct Partial<S: Scalar> {
    coef: S,
    segs: Vec<Seg<S>>,
}

fn is_central<S: Scalar>(e: &Element<S>) -> bool {
    e.terms().iter().all(|(m, _)| m.is_even())
}

/// Merges neighbouring constants and moves central constants to the front.
/// `None` means the term vanished.
fn simplify<S: Scalar>(mut term: Partial<S>) -> Option<Partial<S>> {
    let mut front: Option<Element<S>> = None;
    let mut rest: Vec<Seg<S>> = Vec::with_capacity(term.segs.len());
    for seg in term.segs {
        match seg {
            Seg::Var(i) => rest.push(Seg::Var(i)),
            Seg::Const(c) => {
                let c = match rest.last() {
                    Some(Seg::Const(prev)) => {
                        let merged = prev * &c;
                        rest.pop();
                        merged
                    }
                    _ => c,
                };
                if c.is_zero() {
                    return None;
                }
                if is_central(&c) {
                    let f = match front {
                        Some(f) => &f * &c,
                        None => c,
                    };
                    if f.is_zero() {
                        return None;
                    }
                    front = Some(f);
                } else {
                    rest.push(Seg::Const(c));
                }
            }
        }
    }
    if let Some(f) = front {
        if f.terms().iter().all(|(m, _)| *m == Monomial::ONE) {
            term.coef = term.coef * f.constant_term();
        } else if let Some(Seg::Const(first)) = rest.first_mut() {
            *first = &f * first;
            if first.is_zero() {
                return None;
            }
        } else {
            rest.insert(0, Seg::Const(f));
        }
    }
    term.segs = rest;
    Some(term)
}

/// Sums terms that differ only in their coefficient or, with a single
/// constant, only in that constant.
fn combine<S: Scalar>(terms: Vec<Partial<S>>) -> Vec<Partial<S>> {
    let mut groups: BTreeMap<Vec<Option<usize>>, Partial<S>> = BTreeMap::new();
    let mut loose = Vec::new();
    for t in terms {
        let consts = t.segs.iter().filter(|s| matches!(s, Seg::Const(_))).count();
        if consts > 1 {
            loose.push(t);
            continue;
        }
        let key: Vec<Option<usize>> = t
            .segs
            .iter()
            .map(|s| match s {
                Seg::Var(i) => Some(*i),
                Seg::Const(_) => None,
            })
            .collect();
        let t = if consts == 1 {
            let segs = t
                .segs
                .into_iter()
                .map(|s| match s {
                    Seg::Const(c) => Seg::Const(c.scale(&t.coef)),
                    v => v,
                })
                .collect();
            Partial { coef: S::one(), segs }
        } else {
            t
        };
        match groups.get_mut(&key) {
            None => {
                groups.insert(key, t);
            }
            Some(acc) if consts == 0 => acc.coef = acc.coef.clone() + t.coef,
            Some(acc) => {
                for (a, b) in acc.segs.iter_mut().zip(t.segs) {
                    if let (Seg::Const(x), Seg::Const(y)) = (a, b) {
                        *x = &*x + &y;
                    }
                }
            }
        }
    }
    groups
        .into_values()
        .filter(|t| {
            !t.coef.is_zero()
                && t.segs.iter().all(|s| match s {
                    Seg::Const(c) => !c.is_zero(),
                    Seg::Var(_) => true,
                })
        })
        .chain(loose)
        .collect()
}

fn assign<S: Scalar>(terms: &[Partial<S>], slot: usize, value: &Element<S>) -> Vec<Partial<S>> {
    let substituted = terms.iter().filter_map(|t| {
        let segs = t
            .segs
            .iter()
            .map(|s| match s {
                Seg::Var(i) if *i == slot => Seg::Const(value.clone()),
                other => other.clone(),
            })
            .collect();
        simplify(Partial {
            coef: t.coef.clone(),
            segs,
        })
    });
    combine(substituted.collect())
}

fn total<S: Scalar>(n: Truncation, terms: &[Partial<S>]) -> Element<S> {
    let mut sum = Element::zero(n);
    for t in terms {
        let value = match t.segs.as_slice() {
            [] => Element::constant(n, t.coef.clone()),
            [Seg::Const(c)] => c.scale(&t.coef),
            _ => unreachable!("fully assigned terms are constants"),
        };
        sum = &sum + &value;
    }
    sum
}

/// Depth-first search over candidate tuples in lexicographic order; the
/// first nonzero evaluation is returned.
fn search<S: Scalar>(p: &SuperPolynomial<S>, n: Truncation, pools: &mut Pools<'_, S>) -> (Option<Witness<S>>, u64) {
    let vars: Vec<Variable> = p.variables().into_iter().collect();
    let slot_of: BTreeMap<Variable, usize> = vars.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let start: Vec<Partial<S>> = p
        .terms()
        .iter()
        .map(|(w, c)| Partial {
            coef: c.clone(),
            segs: w.iter().map(|v| Seg::Var(slot_of[v])).collect(),
        })
        .collect();
    let candidates: Vec<Vec<Element<S>>> = vars.iter().map(|v| pools.get(v.sort).to_vec()).collect();

    struct Walk<'c, S: Scalar> {
        n: Truncation,
        candidates: &'c [Vec<Element<S>>],
        chosen: Vec<usize>,
        evaluations: u64,
    }

    impl<S: Scalar> Walk<'_, S> {
        fn go(&mut self, depth: usize, terms: Vec<Partial<S>>) -> Option<Element<S>> {
            if terms.is_empty() {
                return None;
            }
            if depth == self.candidates.len() {
                let value = total(self.n, &terms);
                return (!value.is_zero()).then_some(value);
            }
            let last = depth + 1 == self.candidates.len();
            for (k, c) in self.candidates[depth].iter().enumerate() {
                if last {
                    self.evaluations += 1;
                }
                self.chosen.push(k);
                if let Some(v) = self.go(depth + 1, assign(&terms, depth, c)) {
                    return Some(v);
                }
                self.chosen.pop();
            }
            None
        }
    }

    let mut walk = Walk {
        n,
        candidates: &candidates,
        chosen: Vec::new(),
        evaluations: 0,
    };
    if candidates.is_empty() {
        walk.evaluations = 1;
    }
    let found = walk.go(0, combine(start));
    let witness = found.map(|value| Witness {
        polynomial: p.clone(),
        assignment: vars
            .iter()
            .zip(&walk.chosen)
            .enumerate()
            .map(|(slot, (v, &k))| (*v, candidates[slot][k].clone()))
            .collect(),
        value,
    });
    (witness, walk.evaluations)
}

/// Random combinations of up to four candidates with coefficients in
/// `-2..=2`.
fn random_search<S: Scalar>(
    p: &SuperPolynomial<S>,
    n: Truncation,
    pools: &mut Pools<'_, S>,
    seed: u64,
    trials: usize,
) -> (Option<Witness<S>>, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<Variable> = p.variables().into_iter().collect();
    for trial in 0..trials {
        let mut assignment = BTreeMap::new();
        for v in &vars {
            let pool = pools.get(v.sort);
            let mut value = Element::zero(n);
            if !pool.is_empty() {
                let count = rng.gen_range(1..=pool.len().min(4));
                for k in sample(&mut rng, pool.len(), count) {
                    let c = S::from_int(rng.gen_range(-2..=2));
                    value = &value + &pool[k].scale(&c);
                }
            }
            assignment.insert(*v, value);
        }
        let value = p.evaluate(n, &assignment, None).expect("every variable assigned");
        if !value.is_zero() {
            let witness = Witness {
                polynomial: p.clone(),
                assignment,
                value,
            };
            return (Some(witness), trial as u64 + 1);
        }
    }
    (None, trials as u64)
}
