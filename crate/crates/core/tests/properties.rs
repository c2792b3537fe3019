use proptest::prelude::*;

use trk::algebra::{full_axis, gaussian_eliminate, veronese, PrimeField, SubspaceBasis, Tensor};
use trk::extract::{extract_subspace, verify_certificate};
use trk::rank::{bias, bias_on_axis};

fn prime() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![2u32, 3, 5])
}

/// A random tensor with the given order and side lengths up to `max_n`.
fn tensor(order: std::ops::RangeInclusive<usize>, max_n: usize) -> impl Strategy<Value = Tensor> {
    (prime(), prop::collection::vec(1..=max_n, order)).prop_flat_map(|(p, dims)| {
        let len: usize = dims.iter().product();
        prop::collection::vec(0..p, len).prop_map(move |entries| {
            let f = PrimeField::new(p).unwrap();
            Tensor::new(f, dims.iter().map(|&n| full_axis(n)).collect(), entries).unwrap()
        })
    })
}

fn cube(order: usize, max_n: usize) -> impl Strategy<Value = Tensor> {
    (prime(), 1..=max_n).prop_flat_map(move |(p, n)| {
        prop::collection::vec(0..p, n.pow(order as u32)).prop_map(move |entries| {
            let f = PrimeField::new(p).unwrap();
            Tensor::new(f, vec![full_axis(n); order], entries).unwrap()
        })
    })
}

fn vectors(t: &Tensor, seed: &[u32]) -> Vec<Vec<u32>> {
    let mut it = seed.iter().cycle();
    t.dims()
        .iter()
        .map(|&n| (0..n).map(|_| it.next().copied().unwrap_or(0) % t.p()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evaluation_is_multilinear(t in tensor(1..=3, 3), a in prop::collection::vec(0u32..5, 9),
                                 b in prop::collection::vec(0u32..5, 9), c in 0u32..5, slot in 0usize..3) {
        let f = t.field();
        let slot = slot % t.order();
        let xs = vectors(&t, &a);
        let ys = vectors(&t, &b);
        let c = c % f.p();
        let mut mixed = xs.clone();
        mixed[slot] = xs[slot].iter().zip(&ys[slot]).map(|(&x, &y)| f.add(f.mul(c, x), y)).collect();
        let mut other = xs.clone();
        other[slot] = ys[slot].clone();
        let lhs = t.evaluate(&mixed).unwrap();
        let rhs = f.add(f.mul(c, t.evaluate(&xs).unwrap()), t.evaluate(&other).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn veronese_pairing(t in cube(3, 3), x in prop::collection::vec(0u32..5, 3)) {
        let n = t.axis(0).len();
        let x: Vec<u32> = x[..n].iter().map(|&v| v % t.p()).collect();
        let phi = veronese(t.field(), &x, t.order()).unwrap();
        prop_assert_eq!(t.evaluate(&vec![x; t.order()]).unwrap(), t.inner_product(&phi).unwrap());
    }

    #[test]
    fn restriction_composes(t in cube(3, 5), mask in prop::collection::vec(any::<bool>(), 5),
                            inner in prop::collection::vec(any::<bool>(), 5)) {
        let n = t.axis(0).len();
        let s: Vec<usize> = (1..=n).filter(|&i| mask[i - 1]).collect();
        let s2: Vec<usize> = s.iter().copied().filter(|&i| inner[i - 1]).collect();
        let once = t.restrict(&s2).unwrap();
        let twice = t.restrict(&s).unwrap().restrict(&s2).unwrap();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn bias_invariant_under_leg_permutation(t in tensor(2..=3, 3), k in 0usize..6) {
        let mut order: Vec<usize> = (0..t.order()).collect();
        for _ in 0..k {
            order.rotate_left(1);
            if k % 2 == 1 {
                order.swap(0, t.order() - 1);
            }
        }
        prop_assert_eq!(bias(&t.transpose(&order).unwrap()), bias(&t));
    }

    #[test]
    fn bias_invariant_under_relabelling(t in cube(3, 3), shift in 1usize..4) {
        let n = t.axis(0).len();
        let maps: Vec<Vec<usize>> = (0..3).map(|j| (1..=n).map(|i| (i - 1 + shift * j) % n + 1).collect()).collect();
        prop_assert_eq!(bias(&t.permute_legs(&maps).unwrap()), bias(&t));
    }

    #[test]
    fn restriction_never_lowers_bias(t in cube(3, 4), mask in prop::collection::vec(any::<bool>(), 4)) {
        let n = t.axis(0).len();
        let s: Vec<usize> = (1..=n).filter(|&i| mask[i - 1]).collect();
        prop_assert!(bias(&t) <= bias(&t.restrict(&s).unwrap()));
    }

    #[test]
    fn bias_independent_of_contracted_axis(t in tensor(2..=3, 3)) {
        let b = bias(&t);
        for axis in 0..t.order() {
            prop_assert_eq!(bias_on_axis(&t, axis).unwrap(), b.clone());
        }
    }

    #[test]
    fn bias_invariant_under_scaling(t in tensor(2..=3, 3), c in 1u32..5) {
        let c = c % t.p();
        prop_assume!(c != 0);
        prop_assert_eq!(bias(&t.scale(c)), bias(&t));
    }

    #[test]
    fn arank_at_most_n(t in cube(3, 3)) {
        let n = t.axis(0).len() as f64;
        prop_assert!(bias(&t).arank() <= n + 1e-9);
    }

    #[test]
    fn elimination_has_distinct_increasing_leads(ts in prop::collection::vec(prop::collection::vec(0u32..3, 9), 1..8)) {
        let f = PrimeField::new(3).unwrap();
        let tensors: Vec<Tensor> = ts.into_iter().map(|e| Tensor::new(f, vec![full_axis(3); 2], e).unwrap()).collect();
        let basis = SubspaceBasis::new(tensors.clone()).unwrap();
        let el = gaussian_eliminate(&basis);
        let leads: Vec<Vec<usize>> = el.basis.leads().into_iter().map(Option::unwrap).collect();
        prop_assert!(leads.windows(2).all(|w| w[0] < w[1]));
        prop_assert_eq!(el.basis.len(), basis.rank());
        for t in &tensors {
            prop_assert!(el.basis.coordinates(t).is_some());
        }
    }

    #[test]
    fn tensor_json_round_trip(t in tensor(1..=3, 3)) {
        let text = serde_json::to_string(&t).unwrap();
        let back: Tensor = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(back, t);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(25))]

    #[test]
    fn extraction_certificates_verify(p in prop::sample::select(vec![2u32, 3]), d in 2usize..=3,
                                      n_off in 0usize..4, extra in 0usize..10, seed in any::<u64>()) {
        use rand::SeedableRng;
        let n = if d == 3 && p == 3 { 3 + n_off % 2 } else { d + n_off % (7 - d) };
        let t = n;
        let r = 1 + seed as usize % (t / d);
        let len = n.pow(d as u32);
        let dim = (t * n.pow(d as u32 - 1) + extra).min(len);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let f = PrimeField::new(p).unwrap();
        let v = SubspaceBasis::random(f, n, d, dim, &mut rng).unwrap();
        let cert = extract_subspace(&v, t, r).unwrap();
        prop_assert_eq!(cert.s, t / (d * r));
        let report = verify_certificate(&cert);
        prop_assert!(report.ok, "{:?}", report.failure);
    }
}
