use stirling_bessel::exactnum::{int, rat};
use stirling_bessel::identities::{
    build, run_suite, verify_bessel_duality, verify_gould_3_120, verify_gs_composition,
    verify_hagen_rothe, verify_inversion, verify_lah, verify_lemma_keys, verify_moment_bessel_form,
    verify_sss2, verify_thm1, verify_thm2, HagenRotheCase, IdentityReport, Status, ALL_IDS,
};
use stirling_bessel::triangles::{stirling1, stirling2, Tables};
use stirling_bessel::Error;

fn json_lines(reports: &[IdentityReport]) -> Vec<String> {
    reports
        .iter()
        .map(|r| r.to_json(false).to_string())
        .collect()
}

/// First point, in order, at which `id` fails under `tables`.
fn first_failure(id: &str, tables: &Tables, n_max: u32) -> Option<Vec<i64>> {
    let identity = build(id, tables, n_max).unwrap();
    identity
        .points()
        .iter()
        .find(|p| identity.check(p).is_some())
        .cloned()
}

#[test]
fn full_suite_passes() {
    let reports = run_suite(&Tables::new(21), 20, ALL_IDS).unwrap();
    assert_eq!(reports.len(), ALL_IDS.len());
    for r in &reports {
        assert!(r.passed(), "{} failed: {:?}", r.id, r.counterexample);
        assert!(r.points > 0, "{} checked nothing", r.id);
    }
}

#[test]
fn flipped_stirling1_is_caught_at_the_first_point() {
    let mut tables = Tables::new(21);
    tables.override_stirling1(7, 3, -stirling1(7, 3));
    let reports = run_suite(&tables, 20, ALL_IDS).unwrap();
    let failed: Vec<&IdentityReport> = reports.iter().filter(|r| !r.passed()).collect();
    assert!(!failed.is_empty());
    for r in &failed {
        let cex = r.counterexample.as_ref().unwrap();
        assert_eq!(
            Some(cex.point.clone()),
            first_failure(&r.id, &tables, 20),
            "{}",
            r.id
        );
        assert_ne!(cex.lhs, cex.rhs);
    }
    let thm1 = reports.iter().find(|r| r.id == "thm1").unwrap();
    assert_eq!(thm1.status, Status::Fail);
    assert_eq!(thm1.counterexample.as_ref().unwrap().point, vec![7, 1]);
    // the override is local to the snapshot
    assert!(run_suite(&Tables::new(21), 20, &["thm1"]).unwrap()[0].passed());
}

#[test]
fn perturbed_stirling2_is_caught() {
    let mut tables = Tables::new(21);
    tables.override_stirling2(7, 3, stirling2(7, 3) + int(1));
    let reports = run_suite(&tables, 20, ALL_IDS).unwrap();
    let failed: Vec<&str> = reports
        .iter()
        .filter(|r| !r.passed())
        .map(|r| r.id.as_str())
        .collect();
    assert!(failed.contains(&"thm1"), "{failed:?}");
    assert!(failed.contains(&"inversion"), "{failed:?}");
}

#[test]
fn counterexample_reevaluates_to_unequal_sides() {
    let mut tables = Tables::new(21);
    tables.override_stirling1(9, 4, stirling1(9, 4) * int(2));
    let identity = build("thm2", &tables, 12).unwrap();
    let report = identity.verify();
    let cex = report.counterexample.expect("perturbation detected");
    let (lhs, rhs) = identity.evaluate(&cex.point);
    assert_ne!(lhs, rhs);
    assert_eq!(lhs.to_string(), cex.lhs);
    assert_eq!(rhs.to_string(), cex.rhs);
    assert!(cex.point >= vec![9]);
}

#[test]
fn reports_do_not_depend_on_thread_count() {
    let run = |threads: usize| {
        let mut tables = Tables::new(16);
        tables.override_stirling1(7, 3, -stirling1(7, 3));
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| json_lines(&run_suite(&tables, 15, ALL_IDS).unwrap()))
    };
    let base = run(1);
    assert_eq!(base, run(2));
    assert_eq!(base, run(7));
}

#[test]
fn selection_errors() {
    let t = Tables::new(5);
    let empty: [&str; 0] = [];
    assert!(matches!(run_suite(&t, 5, &empty), Err(Error::Usage(_))));
    assert!(matches!(
        run_suite(&t, 5, &["thm1", "nosuch"]),
        Err(Error::Usage(_))
    ));
    let ids: Vec<String> = run_suite(&t, 5, &["theta-b", "thm1"])
        .unwrap()
        .into_iter()
        .map(|r| r.id)
        .collect();
    assert_eq!(ids, ["thm1", "theta-b"]);
}

#[test]
fn json_schema_and_timing_opt_in() {
    let r = &run_suite(&Tables::new(6), 5, &["lah"]).unwrap()[0];
    let plain = r.to_json(false);
    for key in ["id", "range", "status", "points"] {
        assert!(plain.get(key).is_some(), "{key}");
    }
    assert_eq!(plain["status"], "pass");
    assert!(plain.get("elapsed_ms").is_none());
    assert!(plain.get("counterexample").is_none());
    assert!(r.to_json(true)["elapsed_ms"].is_u64());
}

#[test]
fn standalone_verifiers() {
    let n = 30;
    for r in [
        verify_thm1(n),
        verify_thm2(n),
        verify_inversion(n),
        verify_lah(n),
        verify_bessel_duality(n),
        verify_lemma_keys(15),
        verify_gould_3_120(n),
        verify_moment_bessel_form(15),
    ] {
        assert!(r.passed(), "{} {:?}", r.id, r.counterexample);
    }
    let triples = [
        (rat(5, 2), rat(-3, 2), rat(7, 3)),
        (rat(-4, 1), rat(1, 5), rat(2, 1)),
    ];
    assert!(verify_gs_composition(12, &triples).unwrap().passed());
    assert!(verify_sss2(15, &[rat(3, 1), rat(-5, 3)]).unwrap().passed());
    let cases = [
        HagenRotheCase {
            a: rat(3, 2),
            b: 3,
            c: rat(-2, 5),
            n: 6,
        },
        HagenRotheCase {
            a: rat(1, 1),
            b: 2,
            c: rat(10, 1),
            n: 4,
        },
    ];
    assert!(verify_hagen_rothe(&cases).unwrap().passed());
}

#[test]
fn degenerate_composition_is_rejected() {
    // nu = sigma has no inner GS parameter
    let triples = [(rat(1, 1), rat(2, 1), rat(2, 1))];
    assert!(verify_gs_composition(5, &triples).is_err());
}

#[test]
fn cross_verifier_agreement() {
    use stirling_bessel::identities::{gs_composition, lah_identity, sss2, thm1, thm2};
    let n = 14;
    let paper_triples = [
        (rat(-2, 1), rat(-1, 1), rat(1, 1)),
        (rat(-1, 2), rat(1, 2), rat(1, 1)),
    ];
    assert!(gs_composition(n, &paper_triples).unwrap().verify().passed());
    let clean = Tables::new(n + 1);
    assert!(thm1(&clean, n).verify().passed() && thm2(&clean, n).verify().passed());

    let perturbations: [(bool, u32, u32); 6] = [
        (true, 7, 3),
        (true, 12, 12),
        (true, 5, 1),
        (false, 7, 3),
        (false, 9, 2),
        (false, 14, 13),
    ];
    for (first_kind, pn, pk) in perturbations {
        let mut t = Tables::new(n + 1);
        if first_kind {
            t.override_stirling1(pn, pk, stirling1(pn, pk as i64) + int(1));
        } else {
            t.override_stirling2(pn, pk, stirling2(pn, pk as i64) + int(1));
        }
        let lah_ok = lah_identity(&t, n).verify().passed();
        let thm2_ok = thm2(&t, n).verify().passed();
        assert_eq!(
            lah_ok,
            sss2(&t, n, &[rat(1, 1)]).unwrap().verify().passed(),
            "{pn},{pk}"
        );
        assert_eq!(
            thm2_ok,
            sss2(&t, n, &[rat(-2, 1)]).unwrap().verify().passed(),
            "{pn},{pk}"
        );
        assert!(
            !lah_ok && !thm2_ok && !thm1(&t, n).verify().passed(),
            "{pn},{pk} undetected"
        );
    }
}
