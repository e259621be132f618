//! Randomized algebraic identities, 1000 cases per property.

mod common;

use common::*;
use darbouxlie::exactmath::Monomial;
use darbouxlie::{Blade, MultiVector, Poly, RatMatrix, Q};
use proptest::prelude::*;

fn rat() -> impl Strategy<Value = Q> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn sparse_rat() -> impl Strategy<Value = Q> {
    prop_oneof![2 => Just(Q::from_integer(0.into())), 3 => rat()]
}

fn vec_q(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(rat(), n)
}

fn mv(degree: usize) -> impl Strategy<Value = MultiVector> {
    prop::collection::vec(sparse_rat(), Blade::all(4, degree).len())
        .prop_map(move |x| MultiVector::from_coords(4, degree, &x).unwrap())
}

fn matrix() -> impl Strategy<Value = RatMatrix> {
    (1usize..=5, 1usize..=5)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(sparse_rat(), c), r))
        .prop_map(|rows| {
            let c = rows[0].len();
            RatMatrix::from_rows(&rows, c)
        })
}

fn poly(nvars: usize, max_deg: u32) -> impl Strategy<Value = Poly> {
    let term = (prop::collection::vec(0..=max_deg, nvars), rat());
    prop::collection::vec(term, 0..5).prop_map(move |ts| {
        let mut p = Poly::zero();
        for (mut e, c) in ts {
            // keep the total degree within the bound
            while e.iter().sum::<u32>() > max_deg {
                let i = e.iter().position(|&x| x > 0).unwrap();
                e[i] -= 1;
            }
            p.add_term(c, Monomial::new(e));
        }
        p
    })
}

fn algebra() -> impl Strategy<Value = usize> {
    0..instances().len()
}

fn check(r: Check) -> Result<(), TestCaseError> {
    r.map_err(TestCaseError::fail)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn rref_and_kernel(m in matrix()) {
        check(rref_props(&m))?;
    }

    #[test]
    fn poly_ring_laws(p in poly(4, 3), q in poly(4, 3), r in poly(4, 2)) {
        check(poly_ring(&p, &q, &r))?;
    }

    #[test]
    fn ideal_membership_roundtrip(
        gens in prop::collection::vec(poly(6, 2), 1..4),
        cofs in prop::collection::vec(poly(6, 1), 3),
    ) {
        let cofs = &cofs[..gens.len()];
        check(ideal_roundtrip(&gens, cofs))?;
    }

    #[test]
    fn jacobi_and_antisymmetry(i in algebra(), u in vec_q(4), v in vec_q(4), w in vec_q(4)) {
        check(jacobi(&instances()[i].g, &u, &v, &w))?;
    }

    #[test]
    fn schouten_graded_symmetry(i in algebra(), s in 1usize..=3, l in 1usize..=3, seed in any::<u64>()) {
        let mut gen = Gen::new(seed);
        let (a, b) = (gen.mv(4, s), gen.mv(4, l));
        check(schouten_symmetry(&instances()[i].g, &a, &b))?;
    }

    #[test]
    fn schouten_graded_leibniz(i in algebra(), a in mv(2), b in mv(1), c in mv(2)) {
        check(schouten_leibniz(&instances()[i].g, &a, &b, &c))?;
    }

    #[test]
    fn schouten_leibniz_mixed(i in algebra(), a in mv(1), b in mv(2), c in mv(1)) {
        check(schouten_leibniz(&instances()[i].g, &a, &b, &c))?;
    }

    #[test]
    fn schouten_on_vectors_is_the_bracket(i in algebra(), u in vec_q(4), v in vec_q(4)) {
        check(schouten_degree_one(&instances()[i].g, &u, &v))?;
    }

    #[test]
    fn ad_action_is_a_derivation_of_the_wedge(i in algebra(), v in vec_q(4), p in mv(1), q in mv(2)) {
        check(ad_leibniz(&instances()[i].g, &v, &p, &q))?;
    }

    #[test]
    fn derivations_close_under_commutator(i in algebra(), c1 in vec_q(16), c2 in vec_q(16), v in vec_q(4)) {
        let inst = &instances()[i];
        let k = inst.ders.len();
        check(derivation_closure(&inst.g, &inst.ders, &c1[..k], &c2[..k]))?;
        check(inner_in_span(&inst.g, &inst.ders, &v))?;
    }

    #[test]
    fn lift_respects_leibniz(i in algebra(), c in vec_q(16), u in vec_q(4), w in vec_q(4)) {
        let inst = &instances()[i];
        let d = combination(&inst.ders, &c[..inst.ders.len()]);
        check(lift_leibniz(&d, &u, &w))?;
    }

    #[test]
    fn cocycle_identity(i in algebra(), r in mv(2), v1 in vec_q(4), v2 in vec_q(4)) {
        check(cocycle(&instances()[i].g, &r, &v1, &v2))?;
    }

    #[test]
    fn mcybe_routes_agree(i in algebra(), r in mv(2)) {
        check(mcybe_consistency(&instances()[i], &r))?;
    }

    #[test]
    fn invariant_shift_keeps_class(i in algebra(), r in mv(2), c in vec_q(6)) {
        check(quotient_shift(&instances()[i].g, &r, &c))?;
    }

    #[test]
    fn bivector_rank_is_even(r in mv(2)) {
        check(rank_even(&r))?;
    }
}

#[test]
fn centers_and_invariants_recheck() {
    for inst in instances() {
        center_commutes(&inst.g).unwrap();
        invariants_annihilated(&inst.g).unwrap();
    }
}

/// Every family at 100 random parameter values satisfies Jacobi.
#[test]
fn random_parameters_give_lie_algebras() {
    use darbouxlie::liealg::catalog::instantiate_unchecked;
    use darbouxlie::{CatalogId, Family};
    let mut gen = Gen::new(11);
    for f in Family::ALL {
        if f.param_names().is_empty() {
            continue;
        }
        for _ in 0..100 {
            let params = f
                .param_names()
                .iter()
                .map(|p| (p.to_string(), gen.q()))
                .collect();
            let id = CatalogId::new(f, params);
            let g = instantiate_unchecked(&id).unwrap();
            assert!(g.validate().is_empty(), "{id}");
        }
    }
}

/// 1000 random bivectors per catalog instance, plus every table
/// representative (which solve the mCYBE), through both mCYBE routes.
#[test]
fn mcybe_routes_agree_per_algebra() {
    use darbouxlie::classify::orbit_records;
    let mut gen = Gen::new(5);
    for inst in instances() {
        for _ in 0..1000 {
            mcybe_consistency(inst, &gen.mv(4, 2)).unwrap();
        }
        for rec in orbit_records(&inst.id).unwrap() {
            mcybe_consistency(inst, &rec.rep).unwrap();
        }
    }
}
