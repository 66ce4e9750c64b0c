use dwsurgery::model::{Model, BUILTIN_2D};
use dwsurgery::modular2d::{
    anyons, borromean_from_t3, identity, mat_eq, mat_mul, modular_checks, t3_table, verlinde_fusion, ModularData2D,
};
use dwsurgery::mono::{Mono, Q};
use dwsurgery::statesum::{mcg_trace, partition_function};
use dwsurgery::{complexes::builtin, CycNum};
use proptest::prelude::*;

fn data(name: &str) -> (Model, ModularData2D) {
    let m = Model::builtin(name).unwrap();
    let md = ModularData2D::new(&m).unwrap();
    (m, md)
}

#[test]
fn label_count_equals_torus_partition_function() {
    for name in BUILTIN_2D.iter().chain(["z2cubed"].iter()) {
        let (m, md) = data(name);
        let z = partition_function(&builtin("T3").unwrap(), &m).unwrap();
        assert_eq!(z, CycNum::from_int(md.len() as i64), "{name}");
    }
}

#[test]
fn label_order_is_vacuum_then_lexicographic() {
    for name in BUILTIN_2D {
        let labels = anyons(&Model::builtin(name).unwrap()).unwrap();
        assert_eq!((labels[0].flux, labels[0].char_index), (0, 0), "{name}");
        for w in labels.windows(2) {
            assert!((w[0].flux, w[0].char_index) < (w[1].flux, w[1].char_index), "{name}");
        }
    }
}

#[test]
fn untwisted_s_matrix_is_the_character_pairing() {
    // S_{(a,χ),(b,ψ)} = conj(χ(b)ψ(a)) / |G| for untwisted abelian G
    for name in ["toric", "z2cubed"] {
        let (m, md) = data(name);
        let g = &m.group;
        let n = g.size();
        for (i, x) in md.labels.iter().enumerate() {
            for (j, y) in md.labels.iter().enumerate() {
                let want = (&g.char_value(x.char_index, y.flux) * &g.char_value(y.char_index, x.flux))
                    .conj()
                    .div(&CycNum::from_int(n as i64))
                    .unwrap();
                assert_eq!(md.s[i][j].to_cyc(), want, "{name} S[{i}][{j}]");
            }
            assert_eq!(md.t[i].to_cyc(), g.char_value(x.char_index, x.flux), "{name} T[{i}]");
        }
    }
}

#[test]
fn double_semion_twists() {
    let (_, md) = data("semion");
    let t: Vec<String> = md.t.iter().map(|x| x.to_cyc().to_string()).collect();
    let i = CycNum::root_of_unity(1, 4).to_string();
    let mi = CycNum::root_of_unity(3, 4).to_string();
    assert_eq!(t[0], "cyc(1)[1]");
    let mut flux: Vec<String> = t[2..].to_vec();
    flux.sort();
    let mut want = vec![i, mi];
    want.sort();
    assert_eq!(flux, want);
}

#[test]
fn modular_relations_hold() {
    for name in BUILTIN_2D {
        let (_, md) = data(name);
        let c = modular_checks(&md).unwrap();
        assert!(c.all(), "{name}: {c:?}");
        let conj = md.conjugation().unwrap();
        assert_eq!(conj[0], 0);
        for (i, &j) in conj.iter().enumerate() {
            assert_eq!(conj[j], i, "{name}: conjugation is an involution");
        }
        let s4 = mat_mul(&mat_mul(&md.s, &md.s).unwrap(), &mat_mul(&md.s, &md.s).unwrap()).unwrap();
        assert!(mat_eq(&s4, &identity(md.len(), md.order)), "{name}: S⁴ = 1");
    }
}

#[test]
fn traces_match_mapping_tori() {
    for name in BUILTIN_2D {
        let (m, md) = data(name);
        assert_eq!(md.trace_s().to_cyc(), mcg_trace("Sxy", 2, &m).unwrap(), "{name} Tr S");
        assert_eq!(md.trace_t().to_cyc(), mcg_trace("Txy", 2, &m).unwrap(), "{name} Tr T");
    }
}

#[test]
fn fusion_respects_quantum_dimensions() {
    for name in BUILTIN_2D {
        let (_, md) = data(name);
        let n = md.len();
        let d: Vec<u64> = md.labels.iter().map(|l| l.dim).collect();
        let abelian = d.iter().all(|&x| x == 1);
        let f = verlinde_fusion(&md.s).unwrap();
        for b in 0..n {
            assert_eq!(f[b][0][b], 1, "{name}: vacuum is the unit");
            for c in 0..n {
                let weighted: u64 = (0..n).map(|a| f[a][b][c] * d[a]).sum();
                assert_eq!(weighted, d[b] * d[c], "{name} {b}x{c}");
                if abelian {
                    assert_eq!((0..n).map(|a| f[a][b][c]).sum::<u64>(), 1, "{name} {b}x{c}");
                }
            }
        }
    }
    // (Z₂)³ with the type-III twist has 22 labels, some of dimension 2
    let (_, md) = data("z2cubed_p123");
    assert_eq!(md.len(), 22);
    assert!(md.labels.iter().any(|l| l.dim == 2));
}

#[test]
fn borromean_twist_detection() {
    let table = |name: &str| {
        let (m, md) = data(name);
        let t3 = t3_table(&md, &m).unwrap();
        let br: Vec<CycNum> = borromean_from_t3(&md, &t3).unwrap().iter().map(|a| a.to_cyc()).collect();
        let names: Vec<String> = md.labels.iter().map(|l| l.name(&md.group)).collect();
        (names, br)
    };
    let (na, a) = table("z2cubed");
    let (nb, b) = table("z2cubed_p123");
    let (ka, kb) = (na.len(), nb.len());
    let mut compared = 0;
    let mut differ = 0;
    for (i, x) in nb.iter().enumerate() {
        let Some(ia) = na.iter().position(|y| y == x) else { continue };
        for (j, y) in nb.iter().enumerate() {
            let Some(ja) = na.iter().position(|z| z == y) else { continue };
            for (k, z) in nb.iter().enumerate() {
                let Some(kk) = na.iter().position(|w| w == z) else { continue };
                compared += 1;
                differ += usize::from(a[(ia * ka + ja) * ka + kk] != b[(i * kb + j) * kb + k]);
            }
        }
    }
    assert!(compared > 0 && differ > 0);
}

#[test]
fn untwisted_charge_lines_on_t3() {
    // Z[T³; χ_i, χ_j, χ_k] = |G|⁻¹ Σ_{a,b,c} χ_i(a)χ_j(b)χ_k(c) = |G|² δ_{i0}δ_{j0}δ_{k0}
    let (m, md) = data("z2cubed");
    let n = md.len();
    let t3 = t3_table(&md, &m).unwrap();
    let size = m.group.size() as i64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let (x, y, z) = (&md.labels[i], &md.labels[j], &md.labels[k]);
                if x.flux != 0 || y.flux != 0 || z.flux != 0 {
                    continue;
                }
                let want = if i == 0 && j == 0 && k == 0 { size * size } else { 0 };
                assert_eq!(t3[(i * n + j) * n + k].to_cyc(), CycNum::from_int(want), "{i},{j},{k}");
            }
        }
    }
}

proptest! {
    #[test]
    fn fusion_is_associative_and_commutative(model in 0usize..5, a in 0usize..64, b in 0usize..64, c in 0usize..64) {
        let (_, md) = data(BUILTIN_2D[model]);
        let n = md.len();
        let (a, b, c) = (a % n, b % n, c % n);
        let f = verlinde_fusion(&md.s).unwrap();
        for d in 0..n {
            prop_assert_eq!(f[d][a][b], f[d][b][a]);
            let left: u64 = (0..n).map(|e| f[e][a][b] * f[d][e][c]).sum();
            let right: u64 = (0..n).map(|e| f[e][b][c] * f[d][a][e]).sum();
            prop_assert_eq!(left, right);
        }
    }

    #[test]
    fn s_is_symmetric_with_positive_vacuum_row(model in 0usize..5, i in 0usize..64, j in 0usize..64) {
        let (_, md) = data(BUILTIN_2D[model]);
        let n = md.len();
        let (i, j) = (i % n, j % n);
        prop_assert!(md.s[i][j].same(&md.s[j][i]));
        prop_assert!(md.s[0][i].q() > Q::from(0));
        prop_assert_eq!(md.s[0][i].k(), 0);
        prop_assert!(md.t[i].mul(&md.t[i].conj()).same(&Mono::one(md.order)));
    }
}
