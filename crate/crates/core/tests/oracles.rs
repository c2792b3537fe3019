//! Independent brute-force oracles for the exact bias engine.

use trk::algebra::tensor::for_each_index;
use trk::algebra::{full_axis, PrimeField, Tensor};
use trk::rank::{bias, BiasValue};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Histogram of `T(x_1,…,x_d)` over every tuple of vectors.
fn value_histogram(t: &Tensor) -> Vec<u64> {
    let p = t.p();
    let dims = t.dims();
    let total_coords: usize = dims.iter().sum();
    let mut hist = vec![0u64; p as usize];
    let digits = vec![p as usize; total_coords];
    for_each_index(&digits, |flat| {
        let mut xs = Vec::with_capacity(dims.len());
        let mut at = 0;
        for &n in &dims {
            xs.push(flat[at..at + n].iter().map(|&v| v as u32).collect::<Vec<_>>());
            at += n;
        }
        hist[t.evaluate(&xs).unwrap() as usize] += 1;
    });
    hist
}

/// `E χ(T(x))` over all inputs. The average is real and rational, and the
/// nontrivial p-th roots of unity are independent over Q, so all nonzero
/// values occur equally often and the sum is `h_0 - h_1`.
fn character_bias(t: &Tensor) -> BiasValue {
    let hist = value_histogram(t);
    assert!(hist[1..].iter().all(|&h| h == hist[1]), "non-real character sum {hist:?}");
    let exponent: usize = t.dims().iter().sum();
    let p = t.p();
    // (h_0 - h_1) / p^N with N all coordinates; express as M / p^N
    let m = hist[0] - hist[1];
    BiasValue::new(BigUint::from(m), p, exponent as u32).unwrap()
}

fn random_tensor(rng: &mut ChaCha8Rng, p: u32, dims: &[usize]) -> Tensor {
    let f = PrimeField::new(p).unwrap();
    let axes = dims.iter().map(|&n| full_axis(n)).collect();
    let len = dims.iter().product();
    Tensor::new(f, axes, (0..len).map(|_| rng.gen_range(0..p)).collect()).unwrap()
}

#[test]
fn diagonal_222_matches_character_sum() {
    let f = PrimeField::new(2).unwrap();
    let t = Tensor::from_fn(f, vec![full_axis(2); 3], |c| (c[0] == c[1] && c[1] == c[2]) as i64).unwrap();
    let b = character_bias(&t);
    assert_eq!(b, BiasValue::new(BigUint::from(9u32), 2, 4).unwrap());
    assert_eq!(bias(&t), b);
}

#[test]
fn random_tensors_match_character_sum() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let shapes: &[(u32, &[usize])] = &[
        (2, &[2, 2, 2]),
        (2, &[3, 2, 2]),
        (2, &[2, 3, 1, 2]),
        (3, &[2, 2, 2]),
        (3, &[3, 2]),
        (5, &[2, 2]),
        (5, &[1, 2, 2]),
        (7, &[2, 2]),
    ];
    for &(p, dims) in shapes {
        for _ in 0..6 {
            let t = random_tensor(&mut rng, p, dims);
            assert_eq!(bias(&t), character_bias(&t), "p={p} dims={dims:?} {t:?}");
        }
    }
}

#[test]
fn zero_and_unit_tensors() {
    let f = PrimeField::new(3).unwrap();
    let z = Tensor::zeros(f, vec![full_axis(2), full_axis(1), full_axis(2)]).unwrap();
    assert_eq!(bias(&z), BiasValue::one(3));
    assert_eq!(character_bias(&z), BiasValue::one(3));
    let e = Tensor::unit(f, vec![full_axis(1); 3], &[1, 1, 1]).unwrap();
    // 1 - (2/3)^2 = 5/9
    assert_eq!(bias(&e), BiasValue::new(BigUint::from(5u32), 3, 2).unwrap());
    assert_eq!(character_bias(&e), bias(&e));
}
