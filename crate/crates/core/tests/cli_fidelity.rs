use cubic_orbit::cli::{run_with_env, Report};
use cubic_orbit::closed_form::{solve, Solution};
use cubic_orbit::exact_arith::Rational;
use cubic_orbit::linearization::InitialPair;
use cubic_orbit::matrix_power::SystemParams;
use cubic_orbit::zero_sets::zero_set_member;
use proptest::prelude::*;

fn run_json(args: &[String]) -> (i32, Report) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let argv = std::iter::once("cubic-orbit".to_string()).chain(args.iter().cloned());
    let code = run_with_env(argv, None, &mut out, &mut err);
    let text = String::from_utf8(out).unwrap();
    (code, serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}")))
}

fn rational() -> impl Strategy<Value = Rational> {
    (-4i64..=4, 1i64..=3).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn argv(cmd: &str, p: &SystemParams, init: &InitialPair, extra: &[&str]) -> Vec<String> {
    let mut v: Vec<String> = vec![cmd.into()];
    for (flag, value) in [("-a", &p.a), ("-b", &p.b), ("-c", &p.c), ("-d", &p.d), ("--x0", &init.x0), ("--y0", &init.y0)] {
        v.push(flag.into());
        v.push(value.to_string());
    }
    v.extend(extra.iter().map(|s| s.to_string()));
    v.push("--json".into());
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn solve_json_round_trips(
        a in rational(), b in rational(), c in rational(), d in rational(),
        x0 in rational(), y0 in rational(),
        n in 0u64..5,
        factored in any::<bool>(),
    ) {
        let p = SystemParams::new(a, b, c, d);
        prop_assume!(!p.is_degenerate());
        let init = InitialPair::new(x0, y0);
        let n_text = n.to_string();
        let mut extra = vec!["-n", n_text.as_str()];
        if factored {
            extra.push("--factored");
        }
        let (code, report) = run_json(&argv("solve", &p, &init, &extra));
        match solve(&p, &init, n, 64) {
            Ok(Solution::Term(t)) => {
                prop_assert_eq!(code, 0);
                prop_assert_eq!(report.x.unwrap().to_factored().unwrap(), t.x);
                prop_assert_eq!(report.y.unwrap().to_factored().unwrap(), t.y);
            }
            Ok(Solution::Trivial(r)) => {
                prop_assert_eq!(code, 4);
                prop_assert_eq!(report.trivial.unwrap().witness, Some(r.witness));
            }
            Err(_) => prop_assert_ne!(code, 0),
        }
    }

    #[test]
    fn zeroset_json_round_trips(
        a in rational(), b in rational(), c in rational(), d in rational(),
        x0 in rational(), y0 in rational(),
    ) {
        let p = SystemParams::new(a, b, c, d);
        prop_assume!(!p.is_degenerate());
        let init = InitialPair::new(x0, y0);
        let (_, report) = run_json(&argv("zeroset", &p, &init, &[]));
        let verdict = zero_set_member(&p, &init, 64).unwrap();
        let t = report.trivial.unwrap();
        prop_assert_eq!((t.status, t.witness, t.horizon), (verdict.status, verdict.witness, verdict.horizon));
    }
}
