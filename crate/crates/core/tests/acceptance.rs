//! Acceptance criteria, one PASS/FAIL line each.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use ballprox::extreme::{self, NormedSpacePoint, Space};
use ballprox::hilbert::{
    best_ball_approx_h, dist_ball_h, isometry_distance_check, positive_ball_approx,
    soft_threshold_approx,
};
use ballprox::instances::{self, HilbertShape};
use ballprox::l1::{best_ball_approx_l1, dist_ball_l1, finite_column_oracle};
use ballprox::oracles::{competitor_search, finite_section_bounds, svd_clip_oracle};
use ballprox::{Branch, HilbertOperator, L1Operator, Operator, TailRule, WeightSequence};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CLOSED_FORM: f64 = 1e-10;
const ALGEBRAIC: f64 = 1e-12;

type Criterion = (&'static str, &'static str, fn() -> Outcome);

struct Outcome {
    failures: Vec<String>,
    summary: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            failures: Vec::new(),
            summary: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn within(&mut self, started: Instant, limit: Duration) {
        let elapsed = started.elapsed();
        self.check(elapsed < limit, || {
            format!("runtime {elapsed:.2?} exceeds {limit:?}")
        });
        self.summary.push_str(&format!(" [{elapsed:.2?}]"));
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn hilbert_suite(seed: u64, count: usize) -> Vec<HilbertOperator> {
    let mut rng = rng(seed);
    (0..count)
        .map(|i| instances::random_hilbert(&mut rng, HilbertShape::ALL[i % 3]))
        .collect()
}

fn formula(t: &Operator) -> f64 {
    (t.op_norm() - 1.0).max(t.ess_norm()).max(0.0)
}

fn ac1() -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    let suite = hilbert_suite(1, 500);
    let mut geometric = 0;
    for (i, t) in suite.iter().enumerate() {
        let expected = formula(&t.clone().into());
        let r = best_ball_approx_h(t).expect("valid instance");
        geometric += usize::from(t.weights().is_some_and(|s| !s.tail().is_const()));
        out.check((r.distance - expected).abs() <= CLOSED_FORM, || {
            format!("#{i}: distance {} vs formula {expected}", r.distance)
        });
        out.check(r.approximant.op_norm() <= 1.0 + ALGEBRAIC, || {
            format!("#{i}: approximant norm {}", r.approximant.op_norm())
        });
        let zero_tail = match &r.approximant {
            HilbertOperator::FiniteMatrix(_) => true,
            other => other.weights().unwrap().tail() == TailRule::ZERO,
        };
        out.check(zero_tail, || {
            format!("#{i}: approximant tail is not Const(0)")
        });
    }
    out.check(geometric > 0, || "no geometric tails generated".into());
    out.summary = format!("500 l2 instances ({geometric} geometric tails)");
    out.within(started, Duration::from_secs(5));
    out
}

fn ac2() -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    let mut rng = rng(2);
    let mut worst_margin = f64::INFINITY;
    for i in 0..100 {
        let t: Operator = if i % 4 == 3 {
            instances::random_l1(&mut rng).into()
        } else {
            instances::random_hilbert(&mut rng, HilbertShape::ALL[i % 4]).into()
        };
        let claimed = t.dist_ball();
        let r = competitor_search(&t, claimed, 10_000, 1000 + i as u64).expect("search");
        worst_margin = worst_margin.min(r.best_found - claimed);
        out.check(r.never_beaten, || {
            format!(
                "#{i}: {} beat claimed {claimed} ({})",
                r.best_found, r.best_label
            )
        });
        out.check(r.attained, || {
            format!("#{i}: best {} never attains {claimed}", r.best_found)
        });
    }
    out.summary = format!("100 instances x 10^4 trials, min(best - claimed) = {worst_margin:.3e}");
    out.within(started, Duration::from_secs(60));
    out
}

fn ac3() -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    let mut rng = rng(3);
    let worked = L1Operator::new(
        vec![vec![0.6, 0.9, 0.9]],
        vec![],
        TailRule::constant(1.0).unwrap(),
    )
    .unwrap();
    let mut suite = vec![worked.clone()];
    suite.extend((0..200).map(|_| instances::random_l1(&mut rng)));
    let mut oracle_cases = 0;
    for (i, t) in suite.iter().enumerate() {
        let d = dist_ball_l1(t);
        let expected = formula(&t.clone().into());
        let r = best_ball_approx_l1(t).expect("valid instance");
        for j in 0..t.explicit_len() + 2 {
            let m = r.approximant.column_mass(j);
            out.check(m <= 1.0 + ALGEBRAIC, || {
                format!("#{i}: column {j} mass {m}")
            });
        }
        out.check((r.distance - expected).abs() <= CLOSED_FORM, || {
            format!("#{i}: residual {} vs formula {expected}", r.distance)
        });
        if t.op_norm() - 1.0 >= t.ess_norm() {
            oracle_cases += 1;
            let o = finite_column_oracle(t, t.explicit_len() + 1);
            out.check((o - d).abs() <= CLOSED_FORM, || {
                format!("#{i}: column oracle {o} vs formula {d}")
            });
        }
    }
    let r = best_ball_approx_l1(&worked).unwrap();
    let col = &r.approximant.columns()[0];
    out.check((r.distance - 1.4).abs() <= CLOSED_FORM, || {
        format!("worked instance distance {}", r.distance)
    });
    let target = [0.6, 0.4, 0.0];
    out.check(
        col.iter()
            .zip(target)
            .all(|(a, b)| (a - b).abs() <= CLOSED_FORM),
        || format!("worked instance column {col:?}"),
    );
    out.summary = format!(
        "201 l1 instances ({oracle_cases} oracle cases), worked column {col:?}, distance {}",
        r.distance
    );
    out.within(started, Duration::from_secs(5));
    out
}

fn ac4() -> Outcome {
    let mut out = Outcome::new();
    let shift = HilbertOperator::weighted_shift(vec![], TailRule::constant(1.0).unwrap()).unwrap();
    for a in [0.5, 1.0, 1.5, 3.0, -2.0] {
        let ok = isometry_distance_check(a, &shift).expect("isometry");
        let scaled = shift.scaled(a);
        let d = dist_ball_h(&scaled);
        out.check(ok, || format!("a = {a}: identity check failed"));
        out.check((d - a.abs()).abs() <= ALGEBRAIC, || {
            format!("a = {a}: distance {d}")
        });
        out.check((scaled.ess_norm() - a.abs()).abs() <= ALGEBRAIC, || {
            format!("a = {a}: essential norm {}", scaled.ess_norm())
        });
    }
    out.summary = "unit shift, a in {0.5, 1, 1.5, 3, -2}".into();
    out
}

fn ac5() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(5);
    for i in 0..100 {
        let t = instances::random_positive_diagonal(&mut rng);
        let r = positive_ball_approx(&t).expect("positive input");
        let k = r.approximant.weights().unwrap();
        let n = k.explicit().len() + 2;
        out.check((0..n).all(|p| k.entry(p) >= 0.0), || {
            format!("#{i}: negative entry in {:?}", k.explicit())
        });
        out.check(r.approximant.op_norm() <= 1.0 + ALGEBRAIC, || {
            format!("#{i}: norm {}", r.approximant.op_norm())
        });
        let expected = formula(&t.clone().into());
        out.check((r.distance - expected).abs() <= CLOSED_FORM, || {
            format!("#{i}: distance {} vs {expected}", r.distance)
        });
    }
    out.summary = "100 positive diagonal instances".into();
    out
}

fn extreme_point(space: Space, dim: usize, rng: &mut impl Rng) -> NormedSpacePoint {
    let sign = |rng: &mut dyn rand::RngCore| if rng.random::<bool>() { 1.0 } else { -1.0 };
    let coords = match space {
        Space::Linf => (0..dim).map(|_| sign(rng)).collect(),
        Space::L1 => {
            let mut c = vec![0.0; dim];
            c[rng.random_range(0..dim)] = sign(rng);
            c
        }
        Space::L2 => {
            let v: Vec<f64> = (0..dim).map(|_| rng.random_range(-1.0..1.0)).collect();
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter().map(|x| x / n).collect()
        }
    };
    NormedSpacePoint::new(space, coords).unwrap()
}

fn ac6() -> Outcome {
    let mut out = Outcome::new();
    let started = Instant::now();
    let mut rng = rng(6);
    let tol = 1e-3;
    let mut runs = 0;
    for space in [Space::L1, Space::L2, Space::Linf] {
        for dim in 2..=6 {
            for k in 0..50 {
                let e = extreme_point(space, dim, &mut rng);
                out.check(extreme::is_extreme(&e).unwrap(), || {
                    format!("{e:?} not extreme")
                });
                for alpha in [1.1, -1.1, 2.0, -2.0, 10.0, -10.0] {
                    let (_, d) = extreme::project_scalar_multiple(alpha, &e).unwrap();
                    out.check((d - (alpha.abs() - 1.0)).abs() <= ALGEBRAIC, || {
                        format!("{space:?} alpha {alpha}: distance {d}")
                    });
                    let seed = rng.random::<u64>();
                    let r =
                        extreme::verify_unique_projection(alpha, &e, 10_000, seed, tol).unwrap();
                    runs += 1;
                    out.check(r.pass, || {
                        format!(
                            "{space:?} dim {dim} point {k} alpha {alpha}: min {} radius {} bound {}",
                            r.min_found, r.radius, r.radius_bound
                        )
                    });
                }
            }
        }
    }
    let demo = NormedSpacePoint::new(Space::Linf, vec![1.0, 0.0]).unwrap();
    let r = extreme::verify_unique_projection(2.0, &demo, 10_000, 6, tol).unwrap();
    out.check(!r.pass && r.spread >= 0.1, || {
        format!("non-extreme demo: pass {} spread {}", r.pass, r.spread)
    });
    out.summary = format!(
        "{runs} uniqueness runs x 10^4 samples; Linf (1,0) demo spread {:.3}",
        r.spread
    );
    out.within(started, Duration::from_secs(30));
    out
}

fn ac7() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(7);
    for i in 0..100 {
        let limit: f64 =
            rng.random_range(1.05..4.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        let ratio = rng.random_range(0.1..0.9);
        let len = rng.random_range(0..=12);
        let explicit = (0..len)
            .map(|_| rng.random_range(-0.999..0.999) * limit.abs())
            .collect();
        let seq =
            WeightSequence::new(explicit, TailRule::geometric(limit, ratio).unwrap()).unwrap();
        let t = if i % 2 == 0 {
            HilbertOperator::Diagonal(seq)
        } else {
            HilbertOperator::WeightedShift(seq)
        };
        let r = best_ball_approx_h(&t).unwrap();
        let k = r.approximant.weights().unwrap();
        out.check(
            r.branch == Branch::NonAttaining
                && k.explicit().iter().all(|&e| e == 0.0)
                && k.is_compact(),
            || format!("#{i}: approximant {k:?} via {:?}", r.branch),
        );
        out.check((r.distance - t.op_norm()).abs() <= CLOSED_FORM, || {
            format!("#{i}: distance {} vs norm {}", r.distance, t.op_norm())
        });
        let t: Operator = t.into();
        let upper = formula(&t);
        let mut previous = f64::NEG_INFINITY;
        for n in len.max(1)..=len + 60 {
            let b = finite_section_bounds(&t, n).unwrap();
            out.check(b.lower < upper, || {
                format!("#{i}: N = {n} lower {} not below {upper}", b.lower)
            });
            out.check(b.lower >= previous - ALGEBRAIC, || {
                format!("#{i}: N = {n} lower {} after {previous}", b.lower)
            });
            previous = b.lower;
        }
    }
    out.summary = "100 non-attaining instances, sections N up to explicit + 60".into();
    out
}

fn ac8() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    for i in 0..200 {
        let n = rng.random_range(1..=16);
        let m = instances::random_matrix(&mut rng, n);
        let clip = svd_clip_oracle(&m).unwrap();
        let t = HilbertOperator::FiniteMatrix(ballprox::DenseBlock::new(m).unwrap());
        let r = best_ball_approx_h(&t).unwrap();
        worst = worst.max((clip.distance - r.distance).abs());
        out.check(
            clip.agrees && (clip.distance - r.distance).abs() <= CLOSED_FORM,
            || {
                format!(
                    "matrix #{i}: clip {} vs construction {}",
                    clip.distance, r.distance
                )
            },
        );
        out.check(
            (clip.residual_norm - clip.distance).abs() <= CLOSED_FORM,
            || {
                format!(
                    "matrix #{i}: clip residual {} vs {}",
                    clip.residual_norm, clip.distance
                )
            },
        );
    }
    let suite = hilbert_suite(1, 500);
    for (i, t) in suite.iter().enumerate() {
        let a = best_ball_approx_h(t).unwrap();
        let b = soft_threshold_approx(t).unwrap();
        worst = worst.max((a.distance - b.distance).abs());
        out.check((a.distance - b.distance).abs() <= CLOSED_FORM, || {
            format!(
                "l2 #{i}: soft {} vs construction {}",
                b.distance, a.distance
            )
        });
    }
    out.summary = format!("200 matrices + 500 l2 instances, max disagreement {worst:.3e}");
    out
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("AC1", "distance formula", ac1),
        ("AC2", "optimality certification", ac2),
        ("AC3", "l1 column truncation", ac3),
        ("AC4", "scaled isometry", ac4),
        ("AC5", "positive diagonal approximants", ac5),
        ("AC6", "unique projection at extreme points", ac6),
        ("AC7", "non-attaining branch", ac7),
        ("AC8", "cross-oracle agreement", ac8),
    ];
    let mut failed = 0;
    for (id, name, run) in criteria {
        let out = run();
        let pass = out.failures.is_empty();
        println!(
            "{id} {} {name}: {}",
            if pass { "PASS" } else { "FAIL" },
            out.summary
        );
        if !pass {
            failed += 1;
            println!("    {} failing checks", out.failures.len());
            for f in out.failures.iter().filter(|f| !f.is_empty()) {
                println!("    {f}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 8 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
