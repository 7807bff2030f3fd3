//! Randomized property suites with fixed seeds. Each returns a one-line
//! summary on success and the failing case otherwise.

use std::cell::Cell;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdcodes::Catalog;
use sdcodes_core::binary::{compare_signatures, invariant_signature, SignatureConfig, SignatureVerdict};
use sdcodes_core::construct::{check_four_nega_self_dual, four_negacirculant, transform_matrix, FourNegaSpec};
use sdcodes_core::lattice::{construction_a, short_vectors, EnumerationOptions, IntMatrix, LatticeRep, Ratio};
use sdcodes_core::zring::{
    binary_part, euclidean_weight, is_self_dual_standard, is_type_ii, rho, star_norm, Modulus, RingMatrix, RingVector,
    StdFormCode,
};

pub const CASES: u32 = 1000;

fn runner(cases: u32, seed: u64) -> TestRunner {
    TestRunner::new(Config {
        cases,
        rng_seed: RngSeed::Fixed(seed),
        failure_persistence: None,
        max_global_rejects: 1_000_000,
        ..Config::default()
    })
}

fn check<S: Strategy>(
    name: &str,
    cases: u32,
    seed: u64,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<String, String> {
    runner(cases, seed).run(&strategy, test).map_err(|e| format!("{name}: {e}"))?;
    Ok(format!("{name}: {cases} cases"))
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn random_vector(rng: &mut impl Rng, m: Modulus, n: usize) -> RingVector {
    RingVector::new(m, (0..n).map(|_| rng.random_range(0..m.m())).collect()).unwrap()
}

fn random_matrix(rng: &mut impl Rng, m: Modulus, n: usize) -> RingMatrix {
    RingMatrix::new(m, n, n, (0..n * n).map(|_| rng.random_range(0..m.m())).collect()).unwrap()
}

/// `x`, `y` with `<x,x> = <y,y> = <x,y> = 0`, drawn by rejection.
fn orthogonal_pair(rng: &mut impl Rng, m: Modulus, n: usize) -> (RingVector, RingVector) {
    let x = loop {
        let x = random_vector(rng, m, n);
        if m.dot(x.coords(), x.coords()) == 0 {
            break x;
        }
    };
    loop {
        let y = random_vector(rng, m, n);
        if m.dot(y.coords(), y.coords()) == 0 && m.dot(x.coords(), y.coords()) == 0 {
            return (x, y);
        }
    }
}

fn moduli() -> impl Strategy<Value = u32> {
    prop_oneof![2u32..=12, Just(16), Just(20), Just(40), 13u32..=64]
}

/// Gram preservation under `A(x,y)` and the identity `A(x,y) + A(y,x) = 2A`.
pub fn gram_preservation(cases: u32) -> Result<String, String> {
    check("gram preservation", cases, 0x6a11, (moduli(), 1usize..=12, any::<u64>()), |(m, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Modulus::new(m).unwrap();
        let a = random_matrix(&mut rng, m, n);
        let (x, y) = orthogonal_pair(&mut rng, m, n);
        let t = transform_matrix(&a, &x, &y).unwrap();
        if t.mul_transpose(&t).unwrap() != a.mul_transpose(&a).unwrap() {
            return Err(fail(format!("m={} A={:?} x={:?} y={:?}", m.m(), a.data(), x.coords(), y.coords())));
        }
        let swapped = transform_matrix(&a, &y, &x).unwrap();
        if t.add(&swapped).unwrap() != a.add(&a).unwrap() {
            return Err(fail(format!("A(x,y)+A(y,x) != 2A for m={}", m.m())));
        }
        Ok(())
    })
}

/// `wt_E(v) = v*v (mod 4k)` and `wt_E(v) = sum rho(v_j)^2`.
pub fn euclidean_weight_congruence(cases: u32) -> Result<String, String> {
    check("wt_E = v*v mod 4k", cases, 0x3e1, (1u32..=20, 1usize..=64, any::<u64>()), |(k, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = Modulus::new(2 * k).unwrap();
        let v = random_vector(&mut rng, m, n);
        let w = euclidean_weight(&v).unwrap();
        let s = star_norm(&v).unwrap();
        let direct: i64 = v.coords().iter().map(|&c| rho(c, m).unwrap().pow(2)).sum();
        if w % (4 * k as u64) != s % (4 * k as u64) || w != direct as u64 {
            return Err(fail(format!("k={k} v={:?}: wt_E={w} v*v={s} sum={direct}", v.coords())));
        }
        Ok(())
    })
}

/// Solutions of `AA^T = -I` in blocks of size 1, 2 and 4 over `Z_m`.
fn unit_block(rng: &mut impl Rng, m: Modulus, size: usize) -> Option<Vec<Vec<u32>>> {
    let mm = m.m();
    let neg_one = mm - 1;
    match size {
        1 => {
            let sols: Vec<u32> = (0..mm).filter(|&a| m.mul(a, a) == neg_one).collect();
            let a = *sols.choose(rng)?;
            Some(vec![vec![a]])
        }
        2 => {
            let sols: Vec<(u32, u32)> = (0..mm)
                .flat_map(|a| (0..mm).map(move |b| (a, b)))
                .filter(|&(a, b)| m.add(m.mul(a, a), m.mul(b, b)) == neg_one)
                .collect();
            let &(a, b) = sols.choose(rng)?;
            Some(vec![vec![a, b], vec![m.neg(b), a]])
        }
        _ => {
            // Quaternion block; -1 is a sum of four squares modulo any m.
            let (a, b, c, d) = loop {
                let q: [u32; 4] = std::array::from_fn(|_| rng.random_range(0..mm));
                let s = q.iter().fold(0, |acc, &v| m.add(acc, m.mul(v, v)));
                if s == neg_one {
                    break (q[0], q[1], q[2], q[3]);
                }
            };
            let n = |v| m.neg(v);
            Some(vec![vec![a, b, c, d], vec![n(b), a, n(d), c], vec![n(c), d, a, n(b)], vec![n(d), n(c), b, a]])
        }
    }
}

/// A random self-dual code `(I | A)` of length `2n`: a block diagonal
/// solution of `AA^T = -I`, signed permutations, then neighbor transforms.
pub fn random_self_dual(rng: &mut impl Rng, m: u32, n: usize) -> Option<StdFormCode> {
    let m = Modulus::new(m).unwrap();
    let mut blocks = Vec::new();
    let mut left = n;
    while left > 0 {
        let mut sizes: Vec<usize> = [1, 2, 4].into_iter().filter(|&s| s <= left).collect();
        sizes.shuffle(rng);
        let block = sizes.iter().find_map(|&s| unit_block(rng, m, s))?;
        left -= block.len();
        blocks.push(block);
    }
    let mut a = vec![0u32; n * n];
    let mut off = 0;
    for b in &blocks {
        for (i, row) in b.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                a[(off + i) * n + off + j] = v;
            }
        }
        off += b.len();
    }
    let mut rows: Vec<usize> = (0..n).collect();
    let mut cols: Vec<usize> = (0..n).collect();
    rows.shuffle(rng);
    cols.shuffle(rng);
    let signs: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let data = (0..n * n)
        .map(|idx| {
            let v = a[rows[idx / n] * n + cols[idx % n]];
            if signs[idx % n] {
                m.neg(v)
            } else {
                v
            }
        })
        .collect();
    let mut mat = RingMatrix::new(m, n, n, data).unwrap();
    for _ in 0..rng.random_range(0..3) {
        let (x, y) = orthogonal_pair(rng, m, n);
        mat = transform_matrix(&mat, &x, &y).unwrap();
    }
    Some(StdFormCode::new(mat).unwrap())
}

/// The exhaustive dual of a tiny self-dual code is the code itself.
pub fn brute_force_dual(cases: u32) -> Result<String, String> {
    let strategy = (2u32..=64, 1usize..=8, any::<u64>())
        .prop_filter("ambient space at most 2^16", |&(m, n, _)| (m as f64).powi(2 * n as i32) <= 65536.0);
    check("brute-force dual", cases, 0xd0a1, strategy, |(m, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(code) = random_self_dual(&mut rng, m, n) else {
            return Err(TestCaseError::reject("no unit block"));
        };
        if !is_self_dual_standard(&code) {
            return Err(fail(format!("generator gave a non-self-dual code over Z{m}")));
        }
        let dual = code.dual_by_brute_force().unwrap();
        let words = code.codeword_set(1 << 16).unwrap();
        if dual != words {
            return Err(fail(format!(
                "m={m} A={:?}: |dual|={} |C|={}",
                code.right_block().data(),
                dual.len(),
                words.len()
            )));
        }
        Ok(())
    })
}

/// The four-negacirculant criterion agrees with `AA^T = -I`, and for tiny
/// codes with the brute-force dual.
pub fn four_nega_criterion(cases: u32) -> Result<String, String> {
    let positives = Cell::new(0u32);
    let out =
        check("four-negacirculant criterion", cases, 0x4e6a, (2u32..=12, 1usize..=4, any::<u64>()), |(m, t, seed)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let md = Modulus::new(m).unwrap();
            let spec = FourNegaSpec::new(random_vector(&mut rng, md, t), random_vector(&mut rng, md, t)).unwrap();
            let code = four_negacirculant(&spec);
            let claimed = check_four_nega_self_dual(&spec);
            if claimed != is_self_dual_standard(&code) {
                return Err(fail(format!("m={m} r_a={:?} r_b={:?}", spec.r_a().coords(), spec.r_b().coords())));
            }
            if t == 1 {
                let dual = code.dual_by_brute_force().unwrap();
                if claimed != (dual == code.codeword_set(1 << 16).unwrap()) {
                    return Err(fail(format!("brute force disagrees for m={m}")));
                }
            }
            positives.set(positives.get() + u32::from(claimed));
            Ok(())
        })?;
    Ok(format!("{out}, {} self-dual", positives.get()))
}

/// Fraction-free determinant over arbitrary precision integers.
pub fn bareiss(m: &IntMatrix) -> BigInt {
    let n = m.rows();
    let mut a: Vec<Vec<BigInt>> = (0..n).map(|i| m.row(i).iter().map(|&v| BigInt::from(v)).collect()).collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

fn even_from_gram(lat: &LatticeRep) -> bool {
    let (g, s) = (&lat.gram, lat.scale);
    (0..lat.dim).all(|i| (0..lat.dim).all(|j| if i == j { g.get(i, i) % (2 * s) == 0 } else { g.get(i, j) % s == 0 }))
}

fn lattice_checks(code: &StdFormCode, label: &str) -> Result<(), TestCaseError> {
    let lat = construction_a(code).map_err(|e| fail(format!("{label}: {e}")))?;
    if lat.basis.gram().unwrap() != lat.gram {
        return Err(fail(format!("{label}: gram is not basis * basis^T")));
    }
    let det = bareiss(&lat.gram);
    if det != BigInt::from(lat.scale).pow(lat.dim as u32) {
        return Err(fail(format!("{label}: det(gram) = {det}, scale {}", lat.scale)));
    }
    if !lat.is_unimodular().unwrap() {
        return Err(fail(format!("{label}: is_unimodular disagrees with the determinant")));
    }
    let even = even_from_gram(&lat);
    if even != lat.is_even() || even != is_type_ii(code).unwrap() {
        return Err(fail(format!("{label}: evenness {even} vs is_even {} vs Type II", lat.is_even())));
    }
    Ok(())
}

/// `det(gram) = (2k)^n` and evenness for every catalog code, then for
/// random self-dual codes over even moduli.
pub fn unimodularity(cases: u32) -> Result<String, String> {
    let catalog = Catalog::shipped();
    for e in catalog.entries() {
        let code = catalog.materialize(&e.id).map_err(|err| err.to_string())?;
        lattice_checks(&code, &e.id).map_err(|err| format!("unimodularity: {err}"))?;
        if !e.claims.type_ii {
            return Err(format!("unimodularity: {} is not claimed Type II", e.id));
        }
    }
    let out = check("unimodularity", cases, 0x0de7, (1u32..=20, 1usize..=16, any::<u64>()), |(k, n, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let Some(code) = random_self_dual(&mut rng, 2 * k, n) else {
            return Err(TestCaseError::reject("no unit block"));
        };
        lattice_checks(&code, &format!("random code over Z{}", 2 * k))
    })?;
    Ok(format!("{out} plus {} catalog codes", catalog.entries().len()))
}

fn minor_det(g: &IntMatrix, skip: usize) -> BigInt {
    let n = g.rows();
    if n == 1 {
        return BigInt::one();
    }
    let rows: Vec<Vec<i64>> =
        (0..n).filter(|&i| i != skip).map(|i| (0..n).filter(|&j| j != skip).map(|j| g.get(i, j)).collect()).collect();
    bareiss(&IntMatrix::from_rows(&rows).unwrap())
}

/// Norm counts of every nonzero vector with `c G c^T <= bound`, over the
/// box `|c_i| <= sqrt(bound * (G^-1)_ii)` computed from exact minors.
fn box_counts(g: &IntMatrix, bound: i64) -> Option<Vec<(i64, u64)>> {
    let n = g.rows();
    let det = bareiss(g);
    let radii: Vec<i64> = (0..n)
        .map(|i| {
            let r2 = BigInt::from(bound) * minor_det(g, i) / &det;
            i64::try_from(r2.sqrt()).unwrap()
        })
        .collect();
    let size: f64 = radii.iter().map(|&r| (2 * r + 1) as f64).product();
    if size > 2e6 {
        return None;
    }
    let mut counts = std::collections::BTreeMap::new();
    let mut c: Vec<i64> = radii.iter().map(|&r| -r).collect();
    loop {
        if c.iter().any(|&v| v != 0) {
            let norm: i64 = (0..n).map(|i| (0..n).map(|j| c[i] * g.get(i, j) * c[j]).sum::<i64>()).sum();
            if norm <= bound {
                *counts.entry(norm).or_insert(0u64) += 1;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return Some(counts.into_iter().collect());
            }
            if c[i] < radii[i] {
                c[i] += 1;
                break;
            }
            c[i] = -radii[i];
            i += 1;
        }
    }
}

/// `short_vectors` against a box brute force in dimension at most 8.
pub fn short_vectors_oracle(cases: u32) -> Result<String, String> {
    check("short vectors vs box", cases, 0x5b0c, (1usize..=8, 1i64..=3, any::<u64>()), |(n, scale, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { rng.random_range(1..=3) } else { rng.random_range(-1..=1) }).collect())
            .collect();
        let b = IntMatrix::from_rows(&rows).unwrap();
        let g = b.gram().unwrap();
        if bareiss(&g).is_zero() {
            return Err(TestCaseError::reject("singular"));
        }
        let min_diag = (0..n).map(|i| g.get(i, i)).min().unwrap();
        let bound = min_diag + rng.random_range(0..=2);
        let Some(expected) = box_counts(&g, bound) else {
            return Err(TestCaseError::reject("box too large"));
        };
        let lat = LatticeRep::from_gram(g.clone(), scale).unwrap();
        let report = short_vectors(&lat, Ratio::new(bound, scale).unwrap(), &EnumerationOptions::for_dimension(n))
            .map_err(|e| fail(e.to_string()))?;
        let got: Vec<(Ratio, u64)> = report.norm_counts.clone();
        let want: Vec<(Ratio, u64)> = expected.iter().map(|&(s, c)| (Ratio::new(s, scale).unwrap(), c)).collect();
        if got != want || report.kissing != want[0].1 || report.min_norm != Some(want[0].0) {
            return Err(fail(format!("gram {g}: enumerated {got:?}, box {want:?}")));
        }
        Ok(())
    })
}

/// Signatures of catalog binary parts are unchanged by coordinate
/// permutations.
pub fn signature_permutation_invariance(cases: u32) -> Result<String, String> {
    let catalog = Catalog::shipped();
    let config = SignatureConfig::default();
    let mut parts = Vec::new();
    for e in catalog.entries().iter().filter(|e| e.length <= 32) {
        let bp =
            binary_part(&*catalog.materialize(&e.id).map_err(|err| err.to_string())?).map_err(|err| err.to_string())?;
        let sig = invariant_signature(&bp, &config).map_err(|err| err.to_string())?;
        parts.push((e.id.clone(), bp, sig));
    }
    let count = parts.len();
    let out = check("signature permutation invariance", cases, 0x519e, (0..count, any::<u64>()), |(i, seed)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (id, bp, sig) = &parts[i];
        let mut perm: Vec<usize> = (0..bp.length()).collect();
        perm.shuffle(&mut rng);
        let moved = invariant_signature(&bp.permute(&perm).unwrap(), &config).unwrap();
        if &moved != sig || compare_signatures(sig, &moved).unwrap() != SignatureVerdict::Indistinguishable {
            return Err(fail(format!("{id} under {perm:?}")));
        }
        Ok(())
    })?;
    Ok(format!("{out} over {count} binary parts"))
}

pub type Suite = (&'static str, fn(u32) -> Result<String, String>);

pub const SUITES: &[Suite] = &[
    ("gram_preservation", gram_preservation),
    ("euclidean_weight_congruence", euclidean_weight_congruence),
    ("brute_force_dual", brute_force_dual),
    ("four_nega_criterion", four_nega_criterion),
    ("unimodularity", unimodularity),
    ("short_vectors_oracle", short_vectors_oracle),
    ("signature_permutation_invariance", signature_permutation_invariance),
];
