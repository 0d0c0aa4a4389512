#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::process::Command;
use std::time::{Duration, Instant};

use equising_core::algebra::{BivarPoly, PuiseuxSeries};
use equising_core::arcs::{BarAnalysis, Branch};
use equising_core::checker::{check_family, CheckConfig, Condition};
use equising_core::corpus::{parse_family, run_corpus};
use equising_core::flow::{euler_lemma_check, flow_check, FlowConfig, FlowStatus, WeightedForm};
use equising_core::polygon::{polygon_of, relative_polygon};
use equising_core::roots::expand::ExpandConfig;
use equising_core::{Error, Rat};
use rand::{Rng, SeedableRng};
use serde_json::json;

const CUBE: &str = "x^3+3*t*x^2*y+3*t^2*x*y^2+t^3*y^3-y^4";
const CUBE_NO_MIDDLE: &str = "x^3+3*t*x^2*y+t^3*y^3-y^4";
const QUARTIC: &str = "x^4-t^2*x^2*y^2-y^4";
const QUADRATIC: &str = "x^2+2*x*y-t*y^2";

type Check = Result<String, String>;

fn rat(p: i64, q: i64) -> Rat {
    Rat::new(p.into(), q.into())
}

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, limit: Duration) -> Result<Duration, String> {
    let e = start.elapsed();
    ensure(e < limit, format!("took {e:.2?}, limit {limit:?}"))?;
    Ok(e)
}

fn statuses(expr: &str) -> Result<Vec<&'static str>, String> {
    let f = parse_family(expr, 4).map_err(|e| e.to_string())?;
    let r = check_family(&f, &Condition::ALL, &CheckConfig::default()).map_err(|e| e.to_string())?;
    Ok(r.verdicts.iter().map(|v| v.status()).collect())
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let f = parse_family(CUBE, 4).map_err(|e| e.to_string())?;
    let r = check_family(&f, &Condition::ALL, &CheckConfig::default()).map_err(|e| e.to_string())?;
    let st: Vec<_> = r.verdicts.iter().map(|v| v.status()).collect();
    ensure(st == ["holds"; 3], format!("verdicts {st:?}"))?;
    let a = r.get(Condition::Small).ok_or("no (a) verdict")?;
    let arc = a.chains.iter().find(|c| c["branch"] == "pos").map(|c| c["deformed_arc"].clone());
    ensure(arc == Some(json!("-t*y")), format!("deformed arc {arc:?}"))?;
    let e = within(start, Duration::from_secs(5))?;
    Ok(format!("(a), (A), (A') hold; arc -t*y; {e:.2?}"))
}

fn criterion_2() -> Check {
    let start = Instant::now();
    let f = parse_family(CUBE_NO_MIDDLE, 4).map_err(|e| e.to_string())?;
    let r = check_family(&f, &[Condition::Small], &CheckConfig::default()).map_err(|e| e.to_string())?;
    let v = &r.verdicts[0];
    ensure(v.status() == "fails", format!("(a) is {}", v.status()))?;
    let w = v.witnesses.iter().find(|w| w["kind"] == "dot_below_polygon").ok_or("no exact witness")?;
    ensure(w["dot"] == json!([1, "2"]) && w["coeff"] == "-3*t^2", format!("witness {w}"))?;
    ensure(w["line"]["anchor"] == json!([3, "0"]) && w["line"]["intercept"] == "4", format!("line {}", w["line"]))?;
    let e = within(start, Duration::from_secs(5))?;
    Ok(format!("(a) fails at dot (1,2) with -3*t^2 below (3,0)-(0,4); {e:.2?}"))
}

fn criterion_3() -> Check {
    let f = parse_family(QUARTIC, 4).map_err(|e| e.to_string())?;
    let cfg = ExpandConfig::default();
    let a0 = BarAnalysis::compute(&f.specialize(&rat(0, 1)), 0, &cfg).map_err(|e| e.to_string())?;
    let c0: Vec<_> = a0.critical_on(Branch::Pos).collect();
    ensure(c0.len() == 1 && c0[0].mult == 3, format!("{} points at t=0", c0.len()))?;
    let bar = &a0.bars[c0[0].bar];
    ensure(bar.prefix.is_empty() && bar.height == Some(rat(1, 1)), "the t=0 point is not on bar (0,1)")?;
    for t in [rat(1, 2), rat(-1, 2)] {
        let a = BarAnalysis::compute(&f.specialize(&t), 0, &cfg).map_err(|e| e.to_string())?;
        let c: Vec<_> = a.critical_on(Branch::Pos).collect();
        ensure(c.len() == 3 && c.iter().all(|p| p.mult == 1), format!("{} points at t={t}", c.len()))?;
    }
    let st = statuses(QUARTIC)?;
    ensure(st[0] == "fails" && st[1] == "fails", format!("verdicts {st:?}"))?;
    Ok("m=3 point on bar (0,1) splits into three; (a), (A) fail".into())
}

fn criterion_4() -> Check {
    let st = statuses(QUADRATIC)?;
    ensure(st[0] == "holds" && st[1] == "holds", format!("verdicts {st:?}"))?;
    let f = parse_family(QUADRATIC, 4).map_err(|e| e.to_string())?;
    let arc = PuiseuxSeries::from_terms([(rat(1, 1), rat(-1, 1))], None);
    for t in [rat(-1, 2), rat(0, 1), rat(1, 8), rat(1, 2)] {
        let p = relative_polygon(&f.specialize(&t), &arc, &()).map_err(|e| e.to_string())?;
        ensure(p.vertices == vec![(2, rat(0, 1)), (0, rat(2, 1))], format!("relative polygon at t={t}: {:?}", p.vertices))?;
    }
    let p0 = polygon_of(&f.specialize(&rat(0, 1))).map_err(|e| e.to_string())?;
    let p1 = polygon_of(&f.specialize(&rat(1, 2))).map_err(|e| e.to_string())?;
    ensure(p0 != p1, "absolute polygons agree")?;
    Ok("(a), (A) hold; relative polygon (2,0),(0,2) for all t; absolute polygon moves".into())
}

fn criterion_5() -> Check {
    let start = Instant::now();
    common::initial_form_sweep(5, 200, 6)?;
    let e = within(start, Duration::from_secs(120))?;
    Ok(format!("200 polynomials, defect <= 1e-20 at 256 bits, counts <= m-1; {e:.2?}"))
}

fn criterion_6() -> Check {
    let n = common::polygon_invariance(6, 100)?;
    Ok(format!("{n} perturbed pairs keep their relative polygon"))
}

fn criterion_7() -> Check {
    let start = Instant::now();
    let cfg = FlowConfig::default();
    let mut worst: f64 = 0.0;
    for expr in [QUADRATIC, CUBE] {
        let f = parse_family(expr, 4).map_err(|e| e.to_string())?;
        let tr = flow_check(&f, &cfg, &ExpandConfig::default()).map_err(|e| format!("{expr}: {e}"))?;
        ensure(tr.len() == 10, format!("{expr}: {} trajectories", tr.len()))?;
        for t in &tr {
            ensure(t.status != FlowStatus::Singular, format!("{expr}: singular from {:?}", t.start))?;
            ensure(t.max_drift <= 1e-6, format!("{expr}: drift {:e} from {:?}", t.max_drift, t.start))?;
            worst = worst.max(t.max_drift);
        }
    }
    let e = within(start, Duration::from_secs(30))?;
    Ok(format!("max drift {worst:.2e} over 20 trajectories; {e:.2?}"))
}

fn criterion_8() -> Check {
    common::euler_sweep(8, 100)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let c: i64 = rng.gen_range(-4..=4);
        let e: i64 = loop {
            let e = rng.gen_range(-4..=4);
            if e != c {
                break e;
            }
        };
        // (X - cY)^2 (X - eY)
        let coeffs = [-c * c * e, c * c + 2 * c * e, -(2 * c + e), 1];
        let poly = BivarPoly::from_terms((0..4u32).map(|i| ((i, rat(3 - i as i64, 1)), rat(coeffs[i as usize], 1))), None);
        let w = WeightedForm::new(poly, rat(1, 1)).map_err(|e| e.to_string())?;
        match euler_lemma_check(&w, &rat(c, 1)) {
            Err(Error::Precondition(_)) => {}
            other => return Err(format!("multiple root u0={c} was not rejected: {other:?}")),
        }
    }
    Ok("100 forms have order d with a nonzero unit; 20 multiple roots rejected".into())
}

fn criterion_9() -> Check {
    let corpus = run_corpus(4, &CheckConfig::default()).map_err(|e| e.to_string())?;
    for row in &corpus.rows {
        let st = row.statuses();
        if let Some(why) = common::consistency_violation(&[st[0], st[1], st[2]]) {
            return Err(format!("{}: {why}", row.name));
        }
    }
    let undecided = common::consistency_sweep(9, 50, 4)?;
    Ok(format!("corpus and 50 random families consistent ({undecided} partly undecided)"))
}

fn criterion_10() -> Check {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_equising"))
            .args(["corpus", "--format", "json", "--seed", "3"])
            .output()
            .map_err(|e| e.to_string())
    };
    let (a, b) = (run()?, run()?);
    ensure(a.status.code() == Some(0), format!("corpus exit code {:?}", a.status.code()))?;
    ensure(!a.stdout.is_empty() && a.stdout == b.stdout, "corpus JSON differs between runs")?;
    Ok(format!("two corpus runs, {} identical bytes", a.stdout.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("cube family satisfies (a), (A), (A')", criterion_1),
        ("cube family without middle term fails (a)", criterion_2),
        ("quartic family splits its critical point", criterion_3),
        ("quadratic family has a constant relative polygon", criterion_4),
        ("initial-form factorization and critical-point bound", criterion_5),
        ("relative polygon invariance", criterion_6),
        ("flow keeps levels", criterion_7),
        ("Euler lemma orders", criterion_8),
        ("verdict consistency", criterion_9),
        ("deterministic corpus output", criterion_10),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("PASS criterion {}: {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {}: {name}: {why}", k + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
