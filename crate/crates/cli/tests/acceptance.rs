//! Acceptance suite. Prints one line per criterion and exits nonzero if
//! any criterion fails.

use std::collections::BTreeMap;
use std::error::Error as StdError;
use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;
use supergrass::constructors::{self, Method1Spec, TriangularSpec, Type3RelationInstance};
use supergrass::identities::{self, CheckOptions};
use supergrass::isomorphism::{self, is_graded_iso};
use supergrass::linalg;
use supergrass::{
    Element, Grading, GradingType, HomogeneousModel, Monomial, Parity, QElement, QEndomorphism, QGrading,
    QSuperPolynomial, Rational, Scalar, SuperPolynomial, TailRule, Truncation, Variable,
};

type Q = Rational;
type Check = Result<(), Box<dyn StdError>>;
type Criterion = (&'static str, fn() -> Check);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+).into());
        }
    };
}

fn trunc(n: usize) -> Truncation {
    Truncation::new(n).expect("truncation in range")
}

fn el(n: usize, text: &str) -> QElement {
    Element::parse(trunc(n), text).expect("valid element")
}

fn q(v: i64) -> Q {
    Q::from_int(v)
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Q {
    let num = loop {
        let v = rng.gen_range(-4..=4);
        if v != 0 {
            break v;
        }
    };
    Q::new(num.into(), rng.gen_range(1i64..=3).into())
}

fn random_element(rng: &mut ChaCha8Rng, n: usize, max_terms: usize) -> QElement {
    let terms = (0..rng.gen_range(1..=max_terms))
        .map(|_| (Monomial::from_bits(rng.gen_range(0..1u64 << n)), random_coeff(rng)))
        .collect::<Vec<_>>();
    Element::from_terms(trunc(n), terms).expect("monomials in range")
}

// Independent sparse product: the sign counts, pair by pair, how many
// generators of the right factor have to move past each one of the left.
type Sparse = BTreeMap<u64, Q>;

fn to_sparse(e: &QElement) -> Sparse {
    e.terms().iter().map(|(m, c)| (m.bits(), c.clone())).collect()
}

fn oracle_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (&ma, ca) in a {
        for (&mb, cb) in b {
            if ma & mb != 0 {
                continue;
            }
            let mut swaps = 0;
            for i in 0..64 {
                if ma >> i & 1 == 1 {
                    swaps += (0..i).filter(|j| mb >> j & 1 == 1).count();
                }
            }
            let c = ca.clone() * cb.clone();
            let entry = out.entry(ma | mb).or_insert_with(|| q(0));
            if swaps % 2 == 0 {
                *entry += c;
            } else {
                *entry -= c;
            }
        }
    }
    out.retain(|_, c| *c != q(0));
    out
}

fn kernel_laws() -> Check {
    let n = 10;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..500 {
        let a = random_element(&mut rng, n, 6);
        let b = random_element(&mut rng, n, 6);
        let c = random_element(&mut rng, n, 6);
        ensure!(
            &(&a * &b) * &c == &a * &(&b * &c),
            "associativity fails on {a} | {b} | {c}"
        );
        ensure!(
            &a * &(&b + &c) == &(&a * &b) + &(&a * &c),
            "left distributivity fails on {a} | {b} | {c}"
        );
        ensure!(
            &(&a + &b) * &c == &(&a * &c) + &(&b * &c),
            "right distributivity fails on {a} | {b} | {c}"
        );
        ensure!(
            to_sparse(&(&a * &b)) == oracle_mul(&to_sparse(&a), &to_sparse(&b)),
            "product of {a} and {b} disagrees with the oracle"
        );
        let (x, y) = (a.odd_part(), b.odd_part());
        ensure!(&x * &y == -(&y * &x), "odd parts of {a} and {b} do not anticommute");
        ensure!((&x * &x).is_zero(), "odd part of {a} does not square to zero");
    }
    Ok(())
}

fn triple_commutator() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..200 {
        let xs: Vec<_> = (0..3).map(|_| random_element(&mut rng, 8, 6)).collect();
        let value = Element::left_normed(&xs)?;
        ensure!(value.is_zero(), "[{}, {}, {}] = {value}", xs[0], xs[1], xs[2]);
    }
    let n = trunc(6);
    let gradings = [
        constructors::homogeneous::<Q>(HomogeneousModel::ECan, n)?,
        constructors::homogeneous(HomogeneousModel::EInf, n)?,
        example_phi(6)?,
    ];
    let opts = CheckOptions::exhaustive(2);
    for g in &gradings {
        let v = identities::is_identity(&identities::triple_commutator(), g, &opts)?;
        ensure!(v.holds, "[x1,x2,x3] fails: {:?}", v.witness);
        for p in identities::triple_commutator_patterns::<Q>() {
            let v = identities::is_identity(&p, g, &opts)?;
            ensure!(v.holds, "{p} fails: {:?}", v.witness);
        }
    }
    Ok(())
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    if n == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (rest, sign) in permutations(n - 1) {
        // inserting n at position p passes over len - p larger-positioned entries
        for pos in 0..=rest.len() {
            let mut perm = rest.clone();
            perm.insert(pos, n);
            let flips = (rest.len() - pos) as i64;
            out.push((perm, if flips % 2 == 0 { sign } else { -sign }));
        }
    }
    out
}

fn no_standard_identities() -> Check {
    let n = trunc(8);
    let mut factorial = 1;
    for k in 2..=6usize {
        factorial *= k as i64;
        let s = identities::standard_polynomial::<Q>(k)?;
        let assignment: BTreeMap<_, _> = (1..=k)
            .map(|i| (Variable::x(i as u32), Element::generator(n, i).unwrap()))
            .collect();
        let value = s.evaluate(n, &assignment, None)?;
        let indices: Vec<usize> = (1..=k).collect();
        let closed = Element::from_indices(n, &indices, q(factorial))?;
        let mut by_hand = Element::zero(n);
        for (perm, sign) in permutations(k) {
            let mut word = Element::constant(n, q(sign));
            for i in perm {
                word = &word * &Element::generator(n, i)?;
            }
            by_hand = &by_hand + &word;
        }
        ensure!(value == closed, "s_{k} evaluates to {value}, expected {closed}");
        ensure!(by_hand == closed, "permutation sum for s_{k} is {by_hand}");
        ensure!(!closed.is_zero(), "s_{k} vanishes");
    }
    Ok(())
}

fn shifts(n: usize, entries: &[(usize, &str)]) -> BTreeMap<usize, QElement> {
    entries.iter().map(|&(j, d)| (j, el(n, d))).collect()
}

fn example_spec(n: usize, shift: &str) -> Method1Spec<Q> {
    Method1Spec {
        plus: (2..=n).collect(),
        minus: Default::default(),
        shifts: shifts(n, &[(1, shift)]),
    }
}

fn example_phi(n: usize) -> supergrass::Result<QGrading> {
    constructors::method1(&example_spec(n, "e2e3e4"), trunc(n), TailRule::Identity)
}

fn example_psi(n: usize) -> supergrass::Result<QGrading> {
    constructors::method1(
        &example_spec(n, "e2 + e3 + e4e5e6 + e3e4e7e8e9"),
        trunc(n),
        TailRule::Identity,
    )
}

fn constructor_involutions() -> supergrass::Result<Vec<(String, QEndomorphism)>> {
    let mut out = Vec::new();
    out.push(("method1 phi".to_string(), example_phi(6)?.phi().clone()));
    out.push(("method1 psi".to_string(), example_psi(9)?.phi().clone()));
    let negated = Method1Spec {
        plus: [2, 5].into(),
        minus: Default::default(),
        shifts: shifts(6, &[(4, "e1e2e3")]),
    };
    let g = constructors::method1(&negated, trunc(6), TailRule::Negation)?;
    out.push(("method1 negation tail".to_string(), g.phi().clone()));
    for k in 0..=3 {
        for t in [1, 3, 5] {
            let n = k + t + 4;
            let g = constructors::method2::<Q>(k, t, trunc(n))?;
            out.push((format!("method2 k={k} t={t} N={n}"), g.phi().clone()));
        }
    }
    for (index, p, n) in [(1, "e2e3e4", 5), (2, "e3 + e4e5e6", 6), (3, "e4 - 2e5e6e7", 7)] {
        let spec = TriangularSpec { n: index, p: el(n, p) };
        out.push((
            format!("triangular T{index}"),
            constructors::triangular(&spec, trunc(n))?,
        ));
    }
    Ok(out)
}

fn squares_to_identity(phi: &QEndomorphism) -> supergrass::Result<bool> {
    let square = phi.compose(phi)?;
    let n = phi.truncation();
    Ok((1..=n.get()).all(|i| square.images()[i - 1] == Element::generator(n, i).unwrap()))
}

fn constructors_are_involutions() -> Check {
    let maps = constructor_involutions()?;
    for (name, phi) in &maps {
        let rebuilt = QEndomorphism::new(phi.truncation(), phi.explicit().clone(), phi.tail())?;
        let verified = rebuilt.verify_relations();
        ensure!(verified.is_ok(), "{name}: {}", verified.unwrap_err());
        ensure!(verified?.is_involution()?, "{name} is not an involution");
        ensure!(squares_to_identity(phi)?, "{name} squared is not the identity");
    }
    Ok(())
}

fn tau_group() -> Check {
    let n = 7;
    let specs = vec![
        TriangularSpec { n: 1, p: el(n, "e4") },
        TriangularSpec { n: 2, p: el(n, "e5") },
        TriangularSpec {
            n: 3,
            p: el(n, "e4e5e6"),
        },
    ];
    let group = constructors::tau_group(&specs, trunc(n))?;
    ensure!(group.len() == 8, "group has {} elements", group.len());
    for (i, a) in group.iter().enumerate() {
        ensure!(a.map.is_involution()?, "mask {} is not an involution", a.mask);
        for b in &group[i + 1..] {
            ensure!(
                a.map.images() != b.map.images(),
                "masks {} and {} coincide",
                a.mask,
                b.mask
            );
            let ab = a.map.compose(&b.map)?;
            let ba = b.map.compose(&a.map)?;
            ensure!(
                ab.images() == ba.images(),
                "masks {} and {} do not commute",
                a.mask,
                b.mask
            );
        }
        let s = a.mask.count_ones() as usize;
        let cert = isomorphism::standard_equivalence(&a.grading()?)?.ok_or("no certificate")?;
        ensure!(
            cert.model == HomogeneousModel::EkStar(s).normalized(),
            "mask {} certified as {}",
            a.mask,
            cert.model
        );
        ensure!(
            cert.verified && is_graded_iso(&cert.f, &cert.g),
            "mask {} certificate fails",
            a.mask
        );
    }
    Ok(())
}

fn example_equivalence() -> Check {
    let n = 6;
    let grading = example_phi(n)?;
    let model = constructors::homogeneous::<Q>(HomogeneousModel::EkStar(1), trunc(n))?;
    let f = supergrass::GradedMap::new(model.clone(), grading.clone(), shifts(n, &[(1, "e1 - e2e3e4")]))?;
    let g = supergrass::GradedMap::new(grading.clone(), model, shifts(n, &[(1, "e1 + e2e3e4")]))?;
    ensure!(is_graded_iso(&f, &g), "f and g are not inverse graded isomorphisms");

    let mut generators = identities::triple_commutator_patterns::<Q>();
    generators.push("z1 z2".parse()?);
    let opts = CheckOptions::exhaustive(4);
    for (name, g) in [("phi", grading), ("psi", example_psi(9)?)] {
        let report = identities::inclusion_evidence(&generators, &g, &opts)?;
        if let Some((p, v)) = report.polynomials.iter().zip(&report.verdicts).find(|(_, v)| !v.holds) {
            return Err(format!("{p} fails on {name}: {:?}", v.witness).into());
        }
        ensure!(report.all_hold, "{name}: report is not all-hold");
    }
    Ok(())
}

fn cli_exit_code(args: &[&str]) -> Result<(i32, Value), Box<dyn StdError>> {
    let out = Command::new(env!("CARGO_BIN_EXE_supergrass"))
        .args(args)
        .env_remove("SUPERGRASS_SEED")
        .output()?;
    let code = out.status.code().ok_or("killed by a signal")?;
    Ok((code, serde_json::from_slice(&out.stdout)?))
}

fn falsification_witnesses() -> Check {
    let n = trunc(4);
    let einf = constructors::homogeneous::<Q>(HomogeneousModel::EInf, n)?;
    let p: QSuperPolynomial = "z1 z2".parse()?;
    let v = identities::is_identity(&p, &einf, &CheckOptions::exhaustive(4))?;
    let w = v.witness.as_ref().ok_or("z1 z2 holds on E_inf")?;
    ensure!(w.value == el(4, "e1e3"), "witness value {}", w.value);
    let again = w.polynomial.evaluate(n, &w.assignment, Some(&einf))?;
    ensure!(again == w.value, "witness re-evaluates to {again}");

    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("acceptance_einf.json");
    std::fs::write(&path, r#"{"family":"homogeneous","model":"E_inf","N":4}"#)?;
    let args = ["check-identity", "--poly", "z1 z2", "--grading", path.to_str().unwrap()];
    let (code, first) = cli_exit_code(&args)?;
    ensure!(code == 1, "CLI exit code {code}");
    let value: QElement = serde_json::from_value(first["verdict"]["witness"]["value"].clone())?;
    ensure!(value == el(4, "e1e3"), "CLI witness value {value}");
    let (_, second) = cli_exit_code(&args)?;
    ensure!(first == second, "CLI output is not reproducible");

    let n = trunc(6);
    let commutator: QSuperPolynomial = "[y1, y2]".parse()?;
    let einf = constructors::homogeneous::<Q>(HomogeneousModel::EInf, n)?;
    let v = identities::is_identity(&commutator, &einf, &CheckOptions::exhaustive(4))?;
    let w = v.witness.ok_or("[y1, y2] holds on E_inf")?;
    ensure!(w.value == el(6, "2e2e4"), "witness value {}", w.value);
    let ecan = constructors::homogeneous::<Q>(HomogeneousModel::ECan, n)?;
    let v = identities::is_identity(&commutator, &ecan, &CheckOptions::exhaustive(6))?;
    ensure!(v.holds && v.authoritative, "[y1, y2] fails on E_can: {:?}", v.witness);
    Ok(())
}

fn prop_minus() -> Check {
    let g = constructors::prop_minus::<Q>(trunc(6))?;
    ensure!(!g.is_canonical_type(), "reported as canonical type");
    ensure!(!g.classify_in_basis().canonical, "classification says canonical");
    let cert = isomorphism::standard_equivalence(&g)?.ok_or("no certificate")?;
    ensure!(cert.model == HomogeneousModel::ECan, "certified as {}", cert.model);
    ensure!(
        cert.verified && is_graded_iso(&cert.f, &cert.g),
        "certificate does not verify"
    );
    Ok(())
}

fn swap_example() -> Check {
    let n = 4;
    let g = Grading::from_involution(constructors::swap_example::<Q>(trunc(n))?)?;
    let kind = g.classify_in_basis().kind;
    ensure!(kind == GradingType::EmptyInBasis, "classified as {kind:?}");
    let gens = g.find_homogeneous_generators();
    ensure!(
        gens.plus.len() == 2 && gens.minus.len() == 2,
        "{} + {} generators",
        gens.plus.len(),
        gens.minus.len()
    );
    for v in &gens.plus {
        ensure!(&g.phi().apply(v)? == v, "{v} is not fixed");
    }
    for v in &gens.minus {
        ensure!(g.phi().apply(v)? == -v, "{v} is not negated");
    }
    let found: Vec<_> = gens.plus.iter().chain(&gens.minus).cloned().collect();
    ensure!(linalg::is_independent(&found), "generators are dependent");
    let expected: Vec<_> = ["e1 + e2", "e1 - e2", "e3 + e4", "e3 - e4"]
        .iter()
        .map(|s| el(n, s))
        .collect();
    ensure!(
        linalg::same_span(&found, &expected),
        "span differs from the pair sums and differences"
    );
    Ok(())
}

fn random_unipotent(rng: &mut ChaCha8Rng) -> supergrass::Result<QEndomorphism> {
    let n = rng.gen_range(3..=6);
    let t = trunc(n);
    let higher: Vec<Monomial> = t
        .monomials_up_to(n)
        .into_iter()
        .filter(|m| m.len() >= 3 && !m.is_even())
        .collect();
    loop {
        let mut images = BTreeMap::new();
        let mut nonzero = false;
        for i in 1..=n {
            let mut image = Element::generator(t, i)?;
            if rng.gen_bool(0.5) {
                for _ in 0..rng.gen_range(1..=3) {
                    let m = *higher.choose(rng).unwrap();
                    image = &image + &Element::monomial(t, m, random_coeff(rng))?;
                }
            }
            nonzero |= image != Element::generator(t, i)?;
            images.insert(i, image);
        }
        if nonzero {
            return QEndomorphism::new(t, images, TailRule::Identity)?.verify_relations();
        }
    }
}

fn linearization() -> Check {
    for (name, phi) in constructor_involutions()? {
        let lin = phi.linearize()?;
        ensure!(
            lin.is_verified() && lin.is_involution()?,
            "linearization of {name} is not an involution"
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..100 {
        let phi = random_unipotent(&mut rng)?;
        ensure!(
            phi.linearize()?.images() == QEndomorphism::identity(phi.truncation()).images(),
            "linear part is not the identity"
        );
        ensure!(
            !phi.is_involution()?,
            "unipotent map {:?} squares to the identity",
            phi.images()
        );
    }
    Ok(())
}

fn sample_pairs(rng: &mut ChaCha8Rng, indices: &[usize], count: usize) -> Vec<(usize, usize)> {
    let mut all: Vec<_> = indices
        .iter()
        .flat_map(|&p| indices.iter().filter(move |&&r| r != p).map(move |&r| (p, r)))
        .collect();
    all.shuffle(rng);
    all.truncate(count);
    all
}

fn eq1_checker() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (k, t, n) = (1, 3, 9);
    let tn = trunc(n);
    let prefix: Vec<usize> = (k + 1..=k + t).collect();
    let rest: Vec<usize> = (k + t + 1..=n).collect();
    let v = rest
        .iter()
        .map(|&i| {
            let mut indices = prefix.clone();
            indices.push(i);
            Ok((i, Element::from_indices(tn, &indices, q(1))?))
        })
        .collect::<supergrass::Result<_>>()?;
    let pattern = Type3RelationInstance {
        k,
        v,
        w: BTreeMap::new(),
    };
    let pairs = sample_pairs(&mut rng, &rest, 10);
    ensure!(pairs.len() == 10, "only {} pairs", pairs.len());
    ensure!(
        constructors::verify_eq1(&pattern, &pairs, tn)?,
        "method-2 pattern rejected"
    );

    let k = 2;
    let indices: Vec<usize> = (k + 1..=n).collect();
    let w = indices
        .iter()
        .map(|&i| (i, random_element(&mut rng, n, 4).odd_part()))
        .collect();
    let canonical = Type3RelationInstance {
        k,
        v: BTreeMap::new(),
        w,
    };
    let pairs = sample_pairs(&mut rng, &indices, 10);
    ensure!(constructors::verify_eq1(&canonical, &pairs, tn)?, "all-zero V rejected");

    // e_q e_r on the left with nothing to balance it
    let bad = Type3RelationInstance {
        k: 0,
        v: [(3, el(n, "e5"))].into(),
        w: BTreeMap::new(),
    };
    ensure!(
        !constructors::verify_eq1(&bad, &[(3, 4)], tn)?,
        "unbalanced instance accepted"
    );
    Ok(())
}

fn random_model(rng: &mut ChaCha8Rng, n: usize) -> HomogeneousModel {
    match rng.gen_range(0..4) {
        0 => HomogeneousModel::ECan,
        1 => HomogeneousModel::EInf,
        2 => HomogeneousModel::Ek(rng.gen_range(0..=n)),
        _ => HomogeneousModel::EkStar(rng.gen_range(0..=n)),
    }
}

fn random_method1(rng: &mut ChaCha8Rng, n: usize) -> supergrass::Result<QGrading> {
    let t = trunc(n);
    let mut indices: Vec<usize> = (1..=n).collect();
    indices.shuffle(rng);
    let moved = rng.gen_range(1..=2.min(n - 1));
    let (j, rest) = indices.split_at(moved);
    let mut spec = Method1Spec::default();
    for &i in rest {
        if rng.gen_bool(0.5) {
            spec.plus.insert(i);
        } else {
            spec.minus.insert(i);
        }
    }
    let pool: Vec<Monomial> = t
        .monomials_up_to(n)
        .into_iter()
        .filter(|m| !m.is_even() && rest.iter().any(|&i| m.contains(i)) && j.iter().all(|&i| !m.contains(i)))
        .filter(|m| m.indices().filter(|i| spec.minus.contains(i)).count() % 2 == 0)
        .collect();
    for &jj in j {
        let mut d = Element::zero(t);
        if let Some(&m) = pool.choose(rng) {
            d = &d + &Element::monomial(t, m, random_coeff(rng))?;
        }
        spec.shifts.insert(jj, d);
    }
    constructors::method1(&spec, t, TailRule::Identity)
}

fn random_grading(rng: &mut ChaCha8Rng) -> (String, QGrading) {
    loop {
        let n = rng.gen_range(3..=5);
        let t = trunc(n);
        let (name, built) = match rng.gen_range(0..6) {
            0 => {
                let model = random_model(rng, n);
                (format!("{model}"), constructors::homogeneous(model, t))
            }
            1 => ("method1".to_string(), random_method1(rng, n)),
            2 => {
                let (k, s) = (rng.gen_range(0..=2), [1, 3][rng.gen_range(0..2)]);
                (format!("method2 k={k} t={s}"), constructors::method2(k, s, t))
            }
            3 => {
                let index = rng.gen_range(1..n);
                let above: Vec<Monomial> = t
                    .monomials_up_to(n)
                    .into_iter()
                    .filter(|m| !m.is_even() && m.indices().all(|i| i > index))
                    .collect();
                let m = *above.choose(rng).unwrap();
                let spec = TriangularSpec {
                    n: index,
                    p: Element::monomial(t, m, random_coeff(rng)).unwrap(),
                };
                (
                    format!("triangular T{index}"),
                    constructors::triangular_grading(&spec, t),
                )
            }
            4 => ("prop_minus".to_string(), constructors::prop_minus(t)),
            _ => (
                "swap".to_string(),
                constructors::swap_example(t).and_then(Grading::from_involution),
            ),
        };
        if let Ok(g) = built {
            return (format!("{name} at N={n}"), g);
        }
    }
}

fn random_multilinear(rng: &mut ChaCha8Rng) -> QSuperPolynomial {
    let degree = if rng.gen_bool(0.1) { 1 } else { rng.gen_range(2..=3) };
    let vars: Vec<Variable> = (1..=degree as u32)
        .map(|i| match rng.gen_range(0..5) {
            0 | 1 => Variable::y(i),
            2 | 3 => Variable::z(i),
            _ => Variable::x(i),
        })
        .collect();
    let parts: Vec<QSuperPolynomial> = vars.iter().map(|&v| SuperPolynomial::variable(v)).collect();
    let words = || {
        permutations(degree)
            .into_iter()
            .map(|(perm, sign)| (perm.iter().map(|&i| vars[i - 1]).collect::<Vec<_>>(), sign))
    };
    match rng.gen_range(0..4) {
        0 if degree >= 2 => SuperPolynomial::left_normed(&parts).unwrap(),
        1 => SuperPolynomial::from_terms(words().map(|(w, _)| (w, q(1)))),
        2 => SuperPolynomial::from_terms(words().map(|(w, sign)| (w, q(sign)))),
        _ => loop {
            let p = SuperPolynomial::from_terms(words().map(|(w, _)| (w, q(rng.gen_range(-2..=2)))));
            if !p.is_zero() {
                break p;
            }
        },
    }
}

// Dense reduced row echelon form, used to get eigenspace bases from the full
// matrix of phi without going through the library's projections.
fn null_space(mut rows: Vec<Vec<Q>>, ncols: usize) -> Vec<Vec<Q>> {
    let mut pivots = Vec::new();
    for col in 0..ncols {
        let r = pivots.len();
        let Some(found) = (r..rows.len()).find(|&i| rows[i][col] != q(0)) else {
            continue;
        };
        rows.swap(r, found);
        let lead = rows[r][col].clone();
        rows[r].iter_mut().for_each(|x| *x = x.clone() / lead.clone());
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[col] != q(0) {
                let factor = row[col].clone();
                row.iter_mut()
                    .zip(&pivot)
                    .for_each(|(x, p)| *x = x.clone() - factor.clone() * p.clone());
            }
        }
        pivots.push(col);
    }
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![q(0); ncols];
            v[free] = q(1);
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rows[i][free].clone();
            }
            v
        })
        .collect()
}

struct Oracle {
    even: Vec<Sparse>,
    odd: Vec<Sparse>,
    free: Vec<Sparse>,
}

impl Oracle {
    fn new(g: &QGrading) -> supergrass::Result<Self> {
        let t = g.truncation();
        let dim = 1usize << t.get();
        let columns = (0..dim)
            .map(|m| {
                g.phi()
                    .apply(&Element::monomial(t, Monomial::from_bits(m as u64), q(1))?)
            })
            .collect::<supergrass::Result<Vec<_>>>()?;
        let eigen = |sign: i64| {
            let rows = (0..dim)
                .map(|r| {
                    (0..dim)
                        .map(|c| {
                            let diag = if r == c { q(sign) } else { q(0) };
                            columns[c].coeff(Monomial::from_bits(r as u64)) - diag
                        })
                        .collect()
                })
                .collect();
            null_space(rows, dim)
                .into_iter()
                .map(|v| {
                    v.into_iter()
                        .enumerate()
                        .filter(|(_, c)| *c != q(0))
                        .map(|(m, c)| (m as u64, c))
                        .collect()
                })
                .collect::<Vec<Sparse>>()
        };
        let free = (0..dim as u64).map(|m| [(m, q(1))].into()).collect();
        Ok(Self {
            even: eigen(1),
            odd: eigen(-1),
            free,
        })
    }

    fn candidates(&self, v: Variable) -> &[Sparse] {
        match v.sort.parity() {
            Some(Parity::Even) => &self.even,
            Some(Parity::Odd) => &self.odd,
            None => &self.free,
        }
    }

    /// Whether every substitution of basis vectors gives zero.
    fn holds(&self, p: &QSuperPolynomial) -> bool {
        let vars: Vec<Variable> = p.variables().into_iter().collect();
        let pools: Vec<&[Sparse]> = vars.iter().map(|&v| self.candidates(v)).collect();
        if pools.iter().any(|pool| pool.is_empty()) {
            return true;
        }
        let mut choice = vec![0; vars.len()];
        loop {
            let value = |v: &Variable| {
                &pools[vars.iter().position(|u| u == v).unwrap()][choice[vars.iter().position(|u| u == v).unwrap()]]
            };
            let mut total = Sparse::new();
            for (word, c) in p.terms() {
                let mut prod: Sparse = [(0, c.clone())].into();
                for v in word {
                    prod = oracle_mul(&prod, value(v));
                }
                for (m, x) in prod {
                    *total.entry(m).or_insert_with(|| q(0)) += x;
                }
            }
            if total.values().any(|c| *c != q(0)) {
                return false;
            }
            let mut slot = 0;
            loop {
                if slot == choice.len() {
                    return true;
                }
                choice[slot] += 1;
                if choice[slot] < pools[slot].len() {
                    break;
                }
                choice[slot] = 0;
                slot += 1;
            }
        }
    }
}

fn oracle_equivalence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let (mut holding, mut failing) = (0, 0);
    for _ in 0..50 {
        let (name, g) = random_grading(&mut rng);
        let p = random_multilinear(&mut rng);
        let oracle = Oracle::new(&g)?;
        ensure!(
            oracle.even.len() + oracle.odd.len() == 1 << g.truncation().get(),
            "{name}: eigenspaces do not fill the algebra"
        );
        let verdict = identities::is_identity(&p, &g, &CheckOptions::exhaustive(g.truncation().get()))?;
        let expected = oracle.holds(&p);
        ensure!(
            verdict.holds == expected,
            "{p} on {name}: checker says {}, oracle says {expected}",
            verdict.holds
        );
        if let Some(w) = &verdict.witness {
            let value = w.polynomial.evaluate(g.truncation(), &w.assignment, Some(&g))?;
            ensure!(
                !value.is_zero() && value == w.value,
                "{p} on {name}: witness does not reproduce"
            );
        }
        if expected {
            holding += 1;
        } else {
            failing += 1;
        }
    }
    ensure!(
        holding >= 10 && failing >= 10,
        "sample is one-sided: {holding} hold, {failing} fail"
    );
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("kernel laws at N=10", kernel_laws),
        ("triple commutator vanishes", triple_commutator),
        ("standard polynomials do not vanish", no_standard_identities),
        ("constructor maps are involutions", constructors_are_involutions),
        ("tau group of order 8", tau_group),
        ("example equivalence and inclusion evidence", example_equivalence),
        ("falsification witnesses", falsification_witnesses),
        ("prop_minus is not canonical", prop_minus),
        ("swap example", swap_example),
        ("linearization", linearization),
        ("type-3 relation checker", eq1_checker),
        ("identity checker against brute force", oracle_equivalence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS criterion {:>2}: {name} ({secs:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {:>2}: {name} ({secs:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
