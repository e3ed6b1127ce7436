use num_traits::Zero;
use proptest::prelude::*;

use reshetnyak::cli::suites::c_expansion;
use reshetnyak::opcalc::{adjoint, p_polys, parse, specialize, DimRational, Letter, NCPoly, Word};
use reshetnyak::symtensor::{
    c_contract_oracle, contract_j, delta_power, dim, dot, eps_power, kron_mult_i, power_eval, projector, symmetrize, FullTensor,
    SymTensor, C64,
};

fn tensor(n: usize, m: usize) -> impl Strategy<Value = SymTensor> {
    let len = dim(n, m).unwrap();
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), len)
        .prop_map(move |v| SymTensor::from_comps(n, m, v.into_iter().map(|(a, b)| C64::new(a, b)).collect()).unwrap())
}

fn full_tensor(n: usize, m: usize) -> impl Strategy<Value = FullTensor> {
    prop::collection::vec(-1.0..1.0f64, n.pow(m as u32))
        .prop_map(move |v| FullTensor::new(n, m, v.into_iter().map(|a| C64::new(a, 0.0)).collect()).unwrap())
}

fn unit_vector(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0..1.0f64, n)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let r = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.into_iter().map(|x| x / r).collect()
        })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::I), Just(Letter::J), Just(Letter::D), Just(Letter::Delta)]
}

/// Random rank-preserving polynomial over base rank 4 with small integer coefficients.
fn ncpoly() -> impl Strategy<Value = NCPoly> {
    prop::collection::vec((prop::collection::vec(letter(), 0..7), 0u32..2, -3i64..4), 1..8).prop_map(|terms| {
        let mut p = NCPoly::zero(4);
        for (letters, rad, c) in terms {
            let w = Word::new(letters, rad);
            if w.output_rank(4) == Some(4) {
                p.add_term(w, DimRational::linear(c, 1));
            }
        }
        p
    })
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn symmetrized_tensors_ignore_index_order(t in full_tensor(3, 3)) {
        let s = symmetrize(&t).unwrap();
        for idx in [[0u8, 1, 2], [0, 0, 1], [1, 2, 2]] {
            for p in [[idx[2], idx[0], idx[1]], [idx[1], idx[0], idx[2]]] {
                prop_assert_eq!(s.get(&idx), s.get(&p));
            }
        }
        let again = symmetrize(&s.to_full()).unwrap();
        for (a, b) in again.comps().iter().zip(s.comps()) {
            prop_assert!((a - b).norm() < 1e-14);
        }
    }

    #[test]
    fn i_and_j_are_adjoint((f, g) in (2usize..5, 0usize..4).prop_flat_map(|(n, m)| (tensor(n, m), tensor(n, m + 2)))) {
        let lhs = dot(&kron_mult_i(&f), &g).unwrap();
        let rhs = dot(&f, &contract_j(&g).unwrap()).unwrap();
        prop_assert!(close(lhs, rhs, 1e-12), "{lhs} vs {rhs}");
    }

    #[test]
    fn expansion_matches_brute_force_contraction(g in tensor(2, 4), h in tensor(2, 2), g3 in tensor(3, 1), h3 in tensor(3, 3)) {
        let (a, b) = (c_contract_oracle(&g, &h).unwrap(), c_expansion(&g, &h, 1).unwrap());
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
        let (a, b) = (c_contract_oracle(&g3, &h3).unwrap(), c_expansion(&g3, &h3, -1).unwrap());
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn eps_and_delta_agree_on_tangential_tensors(y in unit_vector(3), raw in tensor(3, 4)) {
        let g = raw.transform_each_index(&projector(&y).unwrap());
        let a = dot(&g, &eps_power(&y, 2).unwrap()).unwrap();
        let b = dot(&g, &delta_power(3, 2)).unwrap();
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn power_eval_is_linear_and_relabeling_invariant(f in tensor(3, 3), g in tensor(3, 3), v in prop::collection::vec(-2.0..2.0f64, 3), c in -2.0..2.0f64) {
        let lin = power_eval(&f.add(&g.scale(C64::new(c, 0.0))).unwrap(), &v).unwrap();
        let sep = power_eval(&f, &v).unwrap() + power_eval(&g, &v).unwrap() * c;
        prop_assert!(close(lin, sep, 1e-12));
        // q sends coordinate a to coordinate perm[a]
        let perm = [2usize, 0, 1];
        let q: Vec<Vec<f64>> = (0..3).map(|i| (0..3).map(|a| f64::from(u8::from(perm[a] == i))).collect()).collect();
        let moved = power_eval(&f.transform_each_index(&q), &v).unwrap();
        let pulled: Vec<f64> = (0..3).map(|a| v[perm[a]]).collect();
        prop_assert!(close(moved, power_eval(&f, &pulled).unwrap(), 1e-12));
    }

    #[test]
    fn adjoint_is_an_involution(p in ncpoly()) {
        prop_assert_eq!(adjoint(&adjoint(&p)), p.clone());
        prop_assert_eq!(parse(&p.to_text(), 4).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn recurrence_polynomials_are_homogeneous_with_integer_coefficients(r in 0usize..3, m in 0usize..6, n in 2i64..7) {
        let ps = p_polys(r, m).unwrap();
        for (&k, p) in &ps {
            prop_assert!(k.unsigned_abs() as usize <= r);
            for w in p.terms().keys() {
                let d_pairs = w.count(Letter::D) as i64 / 2;
                prop_assert_eq!(2 * d_pairs - 2 * w.count(Letter::J) as i64, 2 * k, "word {}", w);
                prop_assert!(d_pairs as usize <= r);
            }
            let s = specialize(p, n).unwrap();
            for c in s.terms().values() {
                prop_assert!(c.is_integer() || c.is_zero(), "{}", c);
            }
        }
    }
}
