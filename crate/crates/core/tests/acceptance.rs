//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::HashSet;
use std::time::{Duration, Instant};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use padic_sos::measure::{
    check_compatibility_resolved, classify_boundedness, partition_function, CompatibilityReport,
    MeasureTable,
};
use padic_sos::padic::{exp_p, log_p, sqrt, sqrt_exists, PadicNumber, Prime};
use padic_sos::solver::{
    analyze_quartic_branch, certify, discriminant_d, quadratic_discriminant, resolvent_poly,
    solve_ti_from, solve_ti_unique, solve_z0_equal_1_branch, z1_branch_map, BoundaryField,
    FieldVector, Provenance, Rhs, SolutionRecord, Verdict,
};
use padic_sos::tree::{ModelParams, TreeVolume, DEFAULT_ENUMERATION_CAP};

const N: u32 = 64;
const CAP: u64 = DEFAULT_ENUMERATION_CAP;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            ok: true,
            detail: String::new(),
        }
    }

    fn check(&mut self, cond: bool, what: impl FnOnce() -> String) {
        if !cond {
            if self.ok {
                self.detail = what();
            }
            self.ok = false;
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        if self.ok {
            self.detail = s.into();
        }
    }
}

fn prime(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Random rational in `E_p`: `(1 + p^e a) / (1 + p^e b)`.
fn random_ep_rational(p: u64, rng: &mut ChaCha8Rng) -> BigRational {
    let e = if p == 2 { 4 } else { p as i64 };
    let a: i64 = rng.gen_range(0..1_000_000);
    let b: i64 = rng.gen_range(0..1_000_000);
    rat(1 + e * a, 1 + e * b)
}

fn random_ep(p: u64, precision: u32, rng: &mut ChaCha8Rng) -> PadicNumber {
    PadicNumber::from_rational(prime(p), &random_ep_rational(p, rng), precision)
}

/// Random element with valuation in `vmin..=vmax` and a random unit part.
fn random_padic(p: u64, vmin: i64, vmax: i64, precision: u32, rng: &mut ChaCha8Rng) -> PadicNumber {
    let mut unit = BigUint::from(rng.gen_range(1..p));
    let mut place = BigUint::from(p);
    for _ in 1..precision {
        unit += &place * BigUint::from(rng.gen_range(0..p));
        place *= p;
    }
    PadicNumber::from_parts(prime(p), rng.gen_range(vmin..=vmax), unit, precision).unwrap()
}

fn random_field(p: u64, m: u32, precision: u32, rng: &mut ChaCha8Rng) -> FieldVector {
    FieldVector::from_free((0..m).map(|_| random_ep(p, precision, rng)).collect()).unwrap()
}

fn report(n: usize, name: &str, out: &Outcome, elapsed: Duration) -> bool {
    println!(
        "criterion {n} {}: {name} ({:.2}s){}",
        if out.ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        if out.detail.is_empty() {
            String::new()
        } else {
            format!(" [{}]", out.detail)
        }
    );
    out.ok
}

fn uniqueness() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut slowest = Duration::ZERO;
    for (p, m) in [(5u64, 2u32), (7, 2), (3, 1), (3, 3)] {
        for k in 1..=3 {
            for _ in 0..5 {
                let start = Instant::now();
                let theta = random_ep_rational(p, &mut rng);
                let params = ModelParams::from_theta_rational(prime(p), k, m, &theta, N).unwrap();
                let starts = [
                    FieldVector::ones(prime(p), m, N),
                    random_field(p, m, N, &mut rng),
                    random_field(p, m, N, &mut rng),
                ];
                let sols: Vec<_> = starts
                    .iter()
                    .map(|s| solve_ti_from(&params, s))
                    .collect::<Result<_, _>>()
                    .unwrap();
                for s in &sols {
                    out.check(s.iterations <= N, || {
                        format!("p={p} m={m} k={k}: {} iterations", s.iterations)
                    });
                    out.check(s.z.is_symmetric(), || {
                        format!("p={p} m={m} k={k}: not symmetric")
                    });
                }
                for w in sols.windows(2) {
                    let d = w[0].z.distance_valuation(&w[1].z).unwrap();
                    out.check(d >= 56, || {
                        format!("p={p} m={m} k={k}: starts agree to {d} digits")
                    });
                }
                slowest = slowest.max(start.elapsed());
            }
        }
    }
    out.check(slowest < Duration::from_secs(1), || {
        format!("slowest instance {slowest:?}")
    });
    for (p, m) in [(5u64, 4u32), (3, 2)] {
        let params = ModelParams::with_theta_int(p, 2, m, 1 + p as i64, N).unwrap();
        out.check(solve_ti_unique(&params).is_err(), || {
            format!("solver accepted p={p} m={m} although p | m+1")
        });
    }
    out
}

fn g_root_residue(rec: &SolutionRecord) -> Option<BigInt> {
    match &rec.provenance {
        Provenance::GRoot { residue, .. } => residue.parse().ok(),
        _ => None,
    }
}

fn transition_theta_28() -> Outcome {
    let mut out = Outcome::new();
    let params = ModelParams::with_theta_int(3, 2, 2, 28, N).unwrap();
    let branch = solve_z0_equal_1_branch(&params).unwrap();
    let cert = certify(&params).unwrap();
    out.check(cert.verdict == Verdict::TransitionCertified, || {
        format!("verdict {}", cert.verdict)
    });
    // The lifted root x of g satisfies z_1 = x^k; recover x mod 9 from the
    // residue class the lift started in.
    let mut classes = Vec::new();
    for rec in &branch.solutions {
        let r = g_root_residue(rec).expect("g-root provenance");
        classes.push(r);
        out.check(rec.residual.valuation >= 56, || {
            format!("residual valuation {}", rec.residual.valuation)
        });
    }
    let one_mod_9 = classes.iter().any(|r| (r % 9u32) == BigInt::from(1));
    let two_mod_3 = classes.iter().any(|r| (r % 3u32) == BigInt::from(2));
    out.check(one_mod_9 && two_mod_3, || {
        format!("root classes {classes:?}")
    });
    out.note(format!(
        "{} solutions on the z_0 = 1 branch",
        branch.solutions.len()
    ));
    out
}

fn transition_theta_118() -> Outcome {
    let mut out = Outcome::new();
    let params = ModelParams::with_theta_int(3, 2, 2, 118, N).unwrap();
    let q = analyze_quartic_branch(&params).unwrap();
    out.check(q.solutions.len() == 2, || {
        format!("{} solutions", q.solutions.len())
    });
    let one = PadicNumber::one(prime(3), N);
    for s in &q.solutions {
        out.check(!s.z.get(0).eq_to_precision(&one), || {
            "solution with z_0 = 1".into()
        });
        out.check(s.residual.valuation >= 40, || {
            format!("residual valuation {}", s.residual.valuation)
        });
    }
    let exists = |t: &Option<padic_sos::solver::SqrtTest>| t.as_ref().map(|t| t.exists);
    out.check(q.d.exists, || "√D missing".into());
    out.check(exists(&q.lower_chain) == Some(true), || {
        "√(2(1−7θ²−√D)) missing".into()
    });
    out.check(exists(&q.upper_chain) == Some(false), || {
        "√(2(1−7θ²+√D)) exists".into()
    });
    out
}

fn no_solution_region() -> Outcome {
    let mut out = Outcome::new();
    let params = ModelParams::with_theta_int(3, 2, 2, 4, N).unwrap();
    let q = analyze_quartic_branch(&params).unwrap();
    out.check(q.solutions.is_empty(), || {
        "θ = 4 has z_0 ≠ 1 solutions".into()
    });
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut p7_roots_outside = 0;
    for p in [5u64, 7] {
        let mut thetas: Vec<BigRational> =
            (0..50).map(|_| random_ep_rational(p, &mut rng)).collect();
        thetas.push(rat(1 + p as i64 * p as i64, 1));
        for theta in thetas {
            let params = ModelParams::from_theta_rational(prime(p), 2, 2, &theta, N).unwrap();
            let q = analyze_quartic_branch(&params).unwrap();
            out.check(q.solutions.is_empty(), || {
                format!("p={p} θ={theta}: solution found")
            });
            if p == 5 {
                out.check(q.all_tests_fail(), || {
                    format!("p=5 θ={theta}: a square-root test passes")
                });
            } else if !q.all_tests_fail() {
                // Roots of the quartic exist in Q_7 but none gives a field in E_7.
                p7_roots_outside += 1;
                out.check(
                    !q.roots.is_empty() && q.rejected.len() == q.roots.len(),
                    || format!("p=7 θ={theta}: roots not all rejected"),
                );
            }
        }
    }
    out.note(format!(
        "p=7: {p7_roots_outside}/51 θ with quartic roots outside E_7"
    ));
    out
}

fn boundedness() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..3 {
        let theta = random_ep_rational(3, &mut rng);
        let params = ModelParams::from_theta_rational(prime(3), 2, 1, &theta, N).unwrap();
        let r = classify_boundedness(&params, None, &[1, 2], CAP).unwrap();
        for l in &r.levels {
            out.check(l.mu_valuation == (0, 0), || {
                format!("(3,1) θ={theta} n={}: v(μ) in {:?}", l.n, l.mu_valuation)
            });
        }
    }
    let params = ModelParams::with_theta_int(3, 2, 2, 28, N).unwrap();
    let cert = certify(&params).unwrap();
    for sol in &cert.solutions {
        let field = sol.field();
        let r = classify_boundedness(&params, Some(&field), &[1, 2], CAP).unwrap();
        let l1 = &r.levels[0];
        out.check(l1.partition_valuation >= 2, || {
            format!("v(Z_1) = {}", l1.partition_valuation)
        });
        out.check(l1.mu_valuation.1 <= -2, || {
            format!("v(μ^(1)) up to {}", l1.mu_valuation.1)
        });
        for l in &r.levels {
            out.check(l.bound_holds, || format!("n={}: norm bound fails", l.n));
        }
    }
    out
}

fn compat_passes(r: &CompatibilityReport, p: u64, what: &str, out: &mut Outcome) {
    out.check(r.residual_valuation >= 56, || {
        format!(
            "{what} p={p} n={}: residual valuation {}",
            r.n, r.residual_valuation
        )
    });
}

fn compatibility() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let solved = [
        (3u64, 1u32, random_ep_rational(3, &mut rng)),
        (5, 2, random_ep_rational(5, &mut rng)),
    ];
    for (p, m, theta) in &solved {
        let params = ModelParams::from_theta_rational(prime(*p), 2, *m, theta, N).unwrap();
        for n in [1, 2] {
            let r = check_compatibility_resolved(&params, n, CAP, |q| {
                Ok(BoundaryField::translation_invariant(solve_ti_unique(q)?.z))
            })
            .unwrap();
            compat_passes(&r, *p, "contraction field", &mut out);
        }
    }
    let params = ModelParams::with_theta_int(3, 2, 2, 28, N).unwrap();
    let count = certify(&params).unwrap().solutions.len();
    for i in 0..count {
        for n in [1, 2] {
            let r = check_compatibility_resolved(&params, n, CAP, |q| {
                Ok(certify(q)?.solutions[i].field())
            })
            .unwrap();
            compat_passes(&r, 3, "θ=28 solution", &mut out);
        }
    }
    let mut worst = i64::MIN;
    for case in 0..20 {
        let (p, m, theta) = match case % 3 {
            0 => (3u64, 1u32, random_ep_rational(3, &mut rng)),
            1 => (5, 2, random_ep_rational(5, &mut rng)),
            _ => (3, 2, rat(28, 1)),
        };
        let free: Vec<BigRational> = (0..m).map(|_| random_ep_rational(p, &mut rng)).collect();
        let params = ModelParams::from_theta_rational(prime(p), 2, m, &theta, N).unwrap();
        let field_at = |q: &ModelParams| {
            let z = free
                .iter()
                .map(|r| PadicNumber::from_rational(q.p, r, q.precision))
                .collect();
            Ok(BoundaryField::translation_invariant(
                FieldVector::from_free(z)?,
            ))
        };
        let r = check_compatibility_resolved(&params, 2, CAP, field_at).unwrap();
        worst = worst.max(r.residual_valuation);
        out.check(r.residual_valuation <= 3, || {
            format!(
                "non-solution p={p} m={m}: residual valuation {}",
                r.residual_valuation
            )
        });
    }
    out.note(format!("non-solution residual valuations at most {worst}"));
    out
}

/// Strong triangle, multiplicativity, exp/log round trips, products in
/// `E_p`, square-root criterion and the contraction bounds.
fn kernel_properties() -> Outcome {
    const CASES: usize = 10_000;
    const P: u32 = 24;
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let primes = [2u64, 3, 5, 7, 11];
    let pick = |rng: &mut ChaCha8Rng, set: &[u64]| set[rng.gen_range(0..set.len())];

    for _ in 0..CASES {
        let p = pick(&mut rng, &primes);
        let x = random_padic(p, -6, 6, P, &mut rng);
        let y = random_padic(p, -6, 6, P, &mut rng);
        let s = &x + &y;
        let lo = x.valuation().min(y.valuation());
        out.check(s.is_zero() || s.valuation() >= lo, || {
            format!("strong triangle: {x} + {y}")
        });
        if x.valuation() != y.valuation() {
            out.check(s.valuation() == lo, || {
                format!("triangle equality: {x} + {y}")
            });
        }
        out.check(
            (&x * &y).valuation() == x.valuation() + y.valuation(),
            || format!("multiplicativity: {x} * {y}"),
        );
    }

    for _ in 0..CASES {
        let p = pick(&mut rng, &primes);
        let t = prime(p).exp_threshold();
        let x = random_padic(p, t, t + 3, P, &mut rng);
        let e = exp_p(&x).unwrap();
        out.check(e.valuation() == 0, || format!("|exp({x})| != 1"));
        out.check(
            (&e - &PadicNumber::one(prime(p), P)).valuation() == x.valuation(),
            || format!("|exp({x}) - 1| != |{x}|"),
        );
        out.check(log_p(&e).unwrap().eq_to_precision(&x), || {
            format!("log(exp({x}))")
        });
        let one_x = &PadicNumber::one(prime(p), P) + &x;
        out.check(
            exp_p(&log_p(&one_x).unwrap())
                .unwrap()
                .eq_to_precision(&one_x),
            || format!("exp(log(1 + {x}))"),
        );
    }

    for _ in 0..CASES {
        let p = pick(&mut rng, &primes);
        let len = rng.gen_range(1..=6);
        let mut prod = PadicNumber::one(prime(p), P);
        for _ in 0..len {
            let t = prime(p).exp_threshold();
            let x = &PadicNumber::one(prime(p), P) + &random_padic(p, t, t + 4, P, &mut rng);
            out.check(x.in_ep(), || format!("{x} should be in E_p"));
            prod = &prod * &x;
        }
        out.check(prod.domain_flags().in_ep, || {
            format!("product {prod} left E_p")
        });
    }

    // Squares modulo p^6 by exhaustive search.
    let tables: Vec<(u64, Vec<bool>)> = [3u64, 5, 7]
        .iter()
        .map(|&p| {
            let modulus = p.pow(6);
            let mut sq = vec![false; modulus as usize];
            for x in 0..modulus {
                sq[(x * x % modulus) as usize] = true;
            }
            (p, sq)
        })
        .collect();
    for _ in 0..CASES {
        let (p, sq) = &tables[rng.gen_range(0..tables.len())];
        let p = *p;
        let v = rng.gen_range(0..=5u32);
        let unit_modulus = p.pow(6 - v);
        let u = loop {
            let u = rng.gen_range(1..unit_modulus);
            if u % p != 0 {
                break u;
            }
        };
        let a = p.pow(v) * u;
        let lib = sqrt_exists(&PadicNumber::from_i64(prime(p), a as i64, P)).unwrap();
        out.check(lib == sq[a as usize], || {
            format!("sqrt_exists({a}) in Q_{p}")
        });
    }

    // Contraction of the right-hand sides for p ∤ m + 1.
    for case in 0..2 * CASES {
        let p = pick(&mut rng, &[2, 3, 5, 7]);
        let m = loop {
            let m = rng.gen_range(1..=4u32);
            if (m as u64 + 1) % p != 0 {
                break m;
            }
        };
        let theta = random_ep_rational(p, &mut rng);
        let params = ModelParams::from_theta_rational(prime(p), 1, m, &theta, P).unwrap();
        let rhs = Rhs::new(&params);
        let len = if case < CASES {
            1
        } else {
            rng.gen_range(1..=4)
        };
        let zs: Vec<FieldVector> = (0..len).map(|_| random_field(p, m, P, &mut rng)).collect();
        let ts: Vec<FieldVector> = (0..len).map(|_| random_field(p, m, P, &mut rng)).collect();
        let dist = zs
            .iter()
            .zip(&ts)
            .map(|(z, t)| z.distance_valuation(t).unwrap())
            .min()
            .unwrap();
        let zr: Vec<&FieldVector> = zs.iter().collect();
        let tr: Vec<&FieldVector> = ts.iter().collect();
        let fz = rhs.product(&zr).unwrap();
        let ft = rhs.product(&tr).unwrap();
        for i in 0..m as usize {
            let d = fz[i].distance_valuation(&ft[i]).unwrap();
            out.check(d >= (dist + 1).min(P as i64 - 2), || {
                format!("contraction p={p} m={m} len={len}: {d} < {dist} + 1")
            });
        }
    }

    // Scalar map on the z_0 = 1 branch, p ≠ 3.
    for _ in 0..CASES {
        let p = pick(&mut rng, &[2, 5, 7, 11]);
        let k = rng.gen_range(1..=4);
        let a = random_ep(p, P, &mut rng);
        let x = random_ep(p, P, &mut rng);
        let y = random_ep(p, P, &mut rng);
        let dx = x.distance_valuation(&y).unwrap();
        let d = z1_branch_map(&a, &x, k)
            .unwrap()
            .distance_valuation(&z1_branch_map(&a, &y, k).unwrap())
            .unwrap();
        out.check(d >= (dx + 1).min(P as i64 - 2), || {
            format!("scalar map p={p} k={k}: {d} < {dx} + 1")
        });
    }
    out
}

/// `Σ 3^n / n!` as an exact rational, reduced modulo 27.
fn exp3_of_3_mod_27() -> u64 {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    for n in 1..=40u32 {
        sum += &term;
        term = term * BigRational::from_integer(3.into()) / BigRational::from_integer(n.into());
    }
    let num = sum.numer().clone();
    let den = sum.denom().clone();
    let m = BigInt::from(27);
    let den_inv = (1..27)
        .map(BigInt::from)
        .find(|c| (&den * c - 1u32) % &m == BigInt::zero())
        .expect("denominator prime to 3");
    let r = ((num * den_inv) % &m + &m) % &m;
    r.to_u64().unwrap()
}

fn concrete_values() -> Outcome {
    let mut out = Outcome::new();
    let p3 = prime(3);

    let oracle = exp3_of_3_mod_27();
    let lib = exp_p(&PadicNumber::from_i64(p3, 3, N))
        .unwrap()
        .residue_u64(3)
        .unwrap();
    out.check(oracle == 13 && lib == 13, || {
        format!("exp_3(3) mod 27: lib {lib}, oracle {oracle}")
    });

    let roots_mod_9: HashSet<u64> = (0..9).filter(|x| x * x % 9 == 7).collect();
    let s = sqrt(&PadicNumber::from_i64(p3, 7, 8))
        .unwrap()
        .residue_u64(2)
        .unwrap();
    out.check(s == 4 && roots_mod_9.contains(&s), || {
        format!("sqrt(7) mod 9 = {s}")
    });

    // Z_1 by direct summation over the root and its three neighbours.
    let mut z1 = 0u64;
    for root in 0..2i64 {
        for leaves in 0..8i64 {
            let e: i64 = (0..3).map(|b| (((leaves >> b) & 1) - root).abs()).sum();
            z1 += 4u64.pow(e as u32);
        }
    }
    let params = ModelParams::with_theta_int(3, 2, 1, 4, N).unwrap();
    let field = BoundaryField::translation_invariant(FieldVector::ones(p3, 1, N));
    let volume = TreeVolume::new(2, 1).unwrap();
    let lib = partition_function(&field, &volume, &params, CAP).unwrap();
    out.check(
        z1 == 250 && lib.eq_to_precision(&PadicNumber::from_i64(p3, 250, N)),
        || format!("Z_1 = {lib}, oracle {z1}"),
    );
    let table = MeasureTable::new(&field, &volume, &params, CAP).unwrap();
    out.check(table.partition.eq_to_precision(&lib), || {
        "table partition differs".into()
    });

    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..10 {
        let t = random_ep_rational(3, &mut rng);
        let t2 = &t * &t;
        let t3 = &t2 * &t;
        let one = BigRational::one();
        let int = |n: i64| BigRational::from_integer(n.into());
        let a = t3.clone();
        let b = &t * (int(3) * &t2 - &one);
        let c = int(2) * &t3 - int(2) * &t + &one;
        let exact = &b * &b - int(4) * &a * &c;
        let d = &t2 * &t2 + int(2) * &t2 - int(4) * &t + &one;
        out.check(exact == &t2 * &d, || format!("θ={t}: exact identity fails"));
        let theta = PadicNumber::from_rational(p3, &t, N);
        let lib = quadratic_discriminant(&resolvent_poly(&theta).unwrap()).unwrap();
        let rhs = &(&theta * &theta) * &discriminant_d(&theta);
        out.check(lib.eq_to_precision(&rhs), || format!("θ={t}: disc != θ²D"));
        out.check(
            lib.eq_to_precision(&PadicNumber::from_rational(p3, &exact, N)),
            || format!("θ={t}: disc differs from exact value"),
        );
    }
    out
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 8] = [
        (
            "uniqueness for p ∤ m+1",
            uniqueness,
            Duration::from_secs(60),
        ),
        (
            "phase transition at θ = 28",
            transition_theta_28,
            Duration::from_secs(1),
        ),
        (
            "phase transition at θ = 118",
            transition_theta_118,
            Duration::from_secs(2),
        ),
        (
            "no z_0 ≠ 1 solutions",
            no_solution_region,
            Duration::from_secs(1),
        ),
        ("boundedness dichotomy", boundedness, Duration::from_secs(5)),
        (
            "compatibility both directions",
            compatibility,
            Duration::from_secs(30),
        ),
        (
            "p-adic kernel properties",
            kernel_properties,
            Duration::from_secs(60),
        ),
        ("concrete values", concrete_values, Duration::from_secs(1)),
    ];
    let mut all = true;
    for (i, (name, f, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = f();
        let elapsed = start.elapsed();
        out.check(elapsed < *limit, || {
            format!("took {elapsed:?}, limit {limit:?}")
        });
        all &= report(i + 1, name, &out, elapsed);
    }
    if !all {
        std::process::exit(1);
    }
}
