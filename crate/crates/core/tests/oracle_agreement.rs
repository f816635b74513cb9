//! Solver and brute-force oracle against solutions frozen from an
//! independent search (`fixtures/gen_oracle.py`).

use lrn_core::solver::{self, Verdict};
use lrn_core::{Integer, ProblemInstance};
use serde_json::Value;

struct Case {
    c: i64,
    p: i64,
    n: u32,
    m_max: u32,
    y_max: u64,
    solutions: Vec<(i64, i64, u32)>,
}

fn cases() -> Vec<Case> {
    let raw: Value = serde_json::from_str(include_str!("fixtures/oracle.json")).unwrap();
    raw.as_array()
        .unwrap()
        .iter()
        .map(|row| Case {
            c: row["c"].as_i64().unwrap(),
            p: row["p"].as_i64().unwrap(),
            n: row["n"].as_u64().unwrap() as u32,
            m_max: row["m_max"].as_u64().unwrap() as u32,
            y_max: row["y_max"].as_u64().unwrap(),
            solutions: row["solutions"]
                .as_array()
                .unwrap()
                .iter()
                .map(|s| {
                    (
                        s[0].as_i64().unwrap(),
                        s[1].as_i64().unwrap(),
                        s[2].as_u64().unwrap() as u32,
                    )
                })
                .collect(),
        })
        .collect()
}

#[test]
fn brute_force_matches_frozen() {
    for case in cases().iter().filter(|c| c.y_max <= 1000) {
        let got: Vec<(i64, i64, u32)> = solver::brute_force_solutions(
            &Integer::from(case.c),
            &Integer::from(case.p),
            case.n,
            case.m_max,
            case.y_max,
        )
        .into_iter()
        .map(|s| (s.x.try_into().unwrap(), s.y.try_into().unwrap(), s.m))
        .collect();
        assert_eq!(got, case.solutions, "c={} p={} n={}", case.c, case.p, case.n);
    }
}

#[test]
fn solver_matches_frozen() {
    let mut decided = 0;
    for case in cases() {
        for m in 0..=case.m_max {
            let inst = ProblemInstance::new(case.c, case.p, m, case.n);
            let out = solver::solve(&inst).unwrap();
            if out.verdict == Verdict::HypothesisViolation {
                continue;
            }
            decided += 1;
            let bound = Integer::from(case.y_max);
            let got: Vec<(Integer, Integer)> =
                out.xy().into_iter().filter(|(_, y)| *y <= bound).collect();
            let want: Vec<(Integer, Integer)> = case
                .solutions
                .iter()
                .filter(|s| s.2 == m)
                .map(|s| (Integer::from(s.0), Integer::from(s.1)))
                .collect();
            assert_eq!(got, want, "{inst}");
        }
    }
    assert!(decided > 400, "only {decided} instances satisfied the hypotheses");
}
