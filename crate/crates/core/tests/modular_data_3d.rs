use dwsurgery::complexes::builtin;
use dwsurgery::model::{Model, BUILTIN_3D};
use dwsurgery::modular3p1d::{Data3p1D, Wrap};
use dwsurgery::mono::{Acc, Mono, Q};
use dwsurgery::statesum::{gsd, mcg_trace, partition_function};
use dwsurgery::CycNum;
use proptest::prelude::*;
use std::sync::OnceLock;

const SMALL: [&str; 3] = ["trivial3d", "z2_3d", "z2z2_p112"];

fn small(i: usize) -> &'static Data3p1D {
    static CELLS: [OnceLock<Data3p1D>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    CELLS[i].get_or_init(|| Data3p1D::new(&Model::builtin(SMALL[i]).unwrap()).unwrap())
}

#[test]
fn string_count_is_the_three_torus_degeneracy() {
    for (i, name) in SMALL.iter().enumerate() {
        let z = partition_function(&builtin("T4").unwrap(), &Model::builtin(name).unwrap()).unwrap();
        assert_eq!(z, CycNum::from_int(small(i).len() as i64), "{name}");
    }
    assert_eq!(gsd("T3", &Model::builtin("z2z2_3d").unwrap()).unwrap(), 64);
    let d = Data3p1D::new(&Model::builtin("z2z2_3d").unwrap()).unwrap();
    assert_eq!(d.len(), 64);
}

#[test]
fn traces_match_mapping_tori() {
    for (i, name) in SMALL.iter().enumerate() {
        let m = Model::builtin(name).unwrap();
        let d = small(i);
        assert_eq!(d.trace_s_xyz().to_cyc(), mcg_trace("Sxyz", 3, &m).unwrap(), "{name} Tr S");
        assert_eq!(d.trace_t_xy().to_cyc(), mcg_trace("Txy", 3, &m).unwrap(), "{name} Tr T");
    }
}

#[test]
fn s_xyz_has_order_three() {
    for i in 0..SMALL.len() {
        assert!(small(i).s_cubed_is_identity().unwrap(), "{}", SMALL[i]);
    }
}

#[test]
fn untwisted_strings_carry_only_charges() {
    // without a twist every (flux, charge, charge) triple is a basis label
    let d = small(1);
    let n = d.group.size();
    assert_eq!(d.len(), n * n * n);
    assert!(d.strings.iter().all(|s| matches!(s.wrap, Wrap::Charges { .. })));
    assert!((0..n).all(|a| d.pure_flux(a).is_some()));
}

#[test]
fn link_is_the_character_pairing() {
    // L^{(S²,S¹)}_{aσ} = Z(S⁴) χ_σ(a)
    for i in 0..SMALL.len() {
        let d = small(i);
        let g = &d.group;
        let z = CycNum::frac(1, g.size() as i64);
        assert!(d.z_s4.same(&Mono::rational(Q::new(1, g.size() as i64), d.order)));
        for a in 0..g.size() {
            for s in 0..g.size() {
                assert_eq!(d.link_s2s1[a][s].to_cyc(), &z * &g.char_value(s, a), "{} a={a} σ={s}", SMALL[i]);
            }
        }
    }
}

#[test]
fn sector_twists_are_phases_grouped_by_flux() {
    for i in 0..SMALL.len() {
        let d = small(i);
        assert_eq!(d.t_xy.len(), d.len());
        for w in d.t_xy_labels.windows(2) {
            assert!(w[0] < w[1]);
        }
        for t in &d.t_xy {
            assert!(t.mul(&t.conj()).same(&Mono::one(d.order)));
        }
        let per_flux = d.t_xy_labels.iter().filter(|l| l.0 == 0).count();
        assert!(d.t_xy_labels.iter().all(|l| l.0 < d.group.size()) && per_flux > 0);
    }
}

#[test]
fn ltri_agrees_across_evaluation_orders() {
    for i in 0..SMALL.len() {
        let d = small(i);
        let n = d.len();
        let table = d.ltri_table().unwrap();
        let zero = d.ltri_00().unwrap();
        for mu in 0..n {
            assert!(zero[mu].same(&table[mu]), "{} μ={mu}", SMALL[i]);
        }
        for (mu3, mu2, mu1) in [(0, 0, 0), (1 % n, 0, n - 1), (n - 1, n / 2, 1 % n), (n / 3, n - 1, n / 2)] {
            assert!(d.ltri(mu3, mu2, mu1).unwrap().same(&table[(mu3 * n + mu2) * n + mu1]), "{}", SMALL[i]);
        }
        // vacuum entry is Z(S⁴)
        assert!(table[0].same(&d.z_s4));
    }
}

#[test]
fn particles_act_as_a_group() {
    for i in 0..SMALL.len() {
        let d = small(i);
        let one = Mono::one(d.order);
        for mu in 0..d.len() {
            assert_eq!(d.f_particle[0][mu], vec![(mu as u32, one)]);
        }
        assert_eq!(d.particles.len(), d.group.size());
    }
}

fn coeff_sum(d: &Data3p1D, path: &[(usize, usize, usize)]) -> CycNum {
    let mut acc = Acc::new(d.order);
    let mut x = Mono::one(d.order);
    for &(k, a, b) in path {
        x = x.mul(&d.f_t2.coeff(k, a, b, d.order));
    }
    acc.add(&x);
    acc.to_cyc()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn t2_fusion_is_commutative_and_associative(model in 0usize..3, a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let d = small(model);
        let n = d.len();
        let (a, b, c) = (a % n, b % n, c % n);
        for k in 0..n {
            prop_assert!(d.f_t2.coeff(k, a, b, d.order).same(&d.f_t2.coeff(k, b, a, d.order)));
        }
        prop_assert_eq!(d.f_t2.get(0, a), &[(a as u32, Mono::one(d.order))][..]);
        for out in 0..n {
            let mut left = CycNum::zero();
            let mut right = CycNum::zero();
            for e in 0..n {
                left = &left + &coeff_sum(d, &[(e, a, b), (out, e, c)]);
                right = &right + &coeff_sum(d, &[(e, b, c), (out, a, e)]);
            }
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn s_xyz_inverse_is_an_inverse(model in 0usize..3, j in 0usize..64) {
        let d = small(model);
        let j = j % d.len();
        let mut v = vec![Acc::new(d.order); d.len()];
        v[j].add(&Mono::one(d.order));
        let w = d.s_xyz_inv.apply(&d.s_xyz.apply(&v, d.order), d.order);
        for (i, x) in w.iter().enumerate() {
            prop_assert_eq!(x.to_cyc(), CycNum::from_int(i64::from(i == j)));
        }
    }
}

#[test]
fn builtins_construct() {
    for name in BUILTIN_3D.iter().filter(|n| **n != "z2four_p1234") {
        let d = Data3p1D::new(&Model::builtin(name).unwrap()).unwrap();
        assert_eq!(d.strings[d.vacuum()], dwsurgery::modular3p1d::StringLabel::pure(0));
    }
}
