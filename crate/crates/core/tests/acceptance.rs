//! Acceptance suite. Each criterion prints one PASS/FAIL line; the process
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use fio_schatten::fio::{
    apply_chirp, build_easy_fio, build_hard_fio, easy_kernel, fio_slice_family,
    quadratic_phase_table, PhaseTable, QuadraticPhase, SymbolTable,
};
use fio_schatten::frames::{
    analyze, canonical_tight_window, dual_window, frame_bounds, synthesize, GaborSystem,
};
use fio_schatten::lab::cli::run_cli_with;
use fio_schatten::lab::ensemble::{make_window, periodized_gaussian};
use fio_schatten::lab::{
    ratio_experiment, sharpness_experiment, ExperimentConfig, TheoremId, WindowKind,
};
use fio_schatten::mixed::{
    classify_permutation, mixed_modulation_norm, mixed_norm, Exponent, ExponentVector, Permutation,
    PermutationClass,
};
use fio_schatten::operator::OperatorMatrix;
use fio_schatten::schatten::{pair_functional, schatten_norm};
use fio_schatten::signal::{dft, idft, stft, FiniteSignal, C64};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn cis(theta: f64) -> C64 {
    C64::new(theta.cos(), theta.sin())
}

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
}

fn random_signal(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> FiniteSignal {
    FiniteSignal::from_fn(n, dim, |_| gaussian(rng)).unwrap()
}

fn random_symbol(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> SymbolTable {
    SymbolTable::from_fn(n, rank, |_| gaussian(rng)).unwrap()
}

fn random_phase(rng: &mut ChaCha8Rng, n: usize, rank: usize) -> PhaseTable {
    PhaseTable::from_fn(n, rank, |_| rng.random::<f64>()).unwrap()
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> OperatorMatrix {
    OperatorMatrix::from_fn(n, |_, _| gaussian(rng)).unwrap()
}

/// `V_g f(k, l) = n^{-1/2} sum_t f(t) conj(g(t - k)) e^{-2 pi i l t / n}` by direct summation.
fn naive_stft(f: &FiniteSignal, g: &FiniteSignal) -> Vec<C64> {
    let n = f.n();
    let mut out = vec![C64::new(0.0, 0.0); n * n];
    for k in 0..n {
        for l in 0..n {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..n {
                let theta = -2.0 * PI * ((l * t) % n) as f64 / n as f64;
                acc += f.values()[t] * g.values()[(t + n - k) % n].conj() * cis(theta);
            }
            out[k * n + l] = acc / (n as f64).sqrt();
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = [8, 16, 64][case % 3];
        let f = random_signal(&mut rng, n, 1);
        let g = random_signal(&mut rng, n, 1);
        let energy = stft(&f, &g).unwrap().energy();
        let expected = f.norm().powi(2) * g.norm().powi(2);
        worst = worst.max((energy - expected).abs() / expected);
        let fhat = dft(&f);
        worst = worst.max((fhat.norm() - f.norm()).abs() / f.norm());
        worst = worst.max(idft(&fhat).sub(&f).unwrap().norm() / f.norm());
    }
    let elapsed = start.elapsed();
    check(
        worst <= 1e-12 && elapsed < Duration::from_secs(5),
        format!("max rel err {worst:.2e}, {:.2} s", elapsed.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let mut worst_delta = 0.0f64;
    for n in [4, 8, 16, 32] {
        let b = frame_bounds(&GaborSystem::full(FiniteSignal::delta(n, 1, &[0]).unwrap()).unwrap());
        worst_delta = worst_delta
            .max((b.lower - n as f64).abs())
            .max((b.upper - n as f64).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst_recon = 0.0f64;
    let mut worst_tight = 0.0f64;
    for _ in 0..20 {
        let sys = GaborSystem::new(random_signal(&mut rng, 16, 1), 2, 2).unwrap();
        let dual = sys.with_window(dual_window(&sys).unwrap()).unwrap();
        let f = random_signal(&mut rng, 16, 1);
        let back = synthesize(&dual, &analyze(&sys, &f).unwrap()).unwrap();
        worst_recon = worst_recon.max(back.sub(&f).unwrap().max_abs());
        let tight = sys
            .with_window(canonical_tight_window(&sys).unwrap())
            .unwrap();
        let b = frame_bounds(&tight);
        worst_tight = worst_tight
            .max((b.lower - 1.0).abs())
            .max((b.upper - 1.0).abs());
    }
    check(
        worst_delta <= 1e-12 && worst_recon <= 1e-10 && worst_tight <= 1e-10,
        format!(
            "delta bounds err {worst_delta:.1e}, reconstruction {worst_recon:.1e}, tight bounds {worst_tight:.1e}"
        ),
    )
}

/// Nested-loop oracle: position `k` of the permuted array indexes original
/// axis `c(k)`; positions are contracted from 1 upward.
fn oracle_mixed_norm(mags: &[f64], shape: &[usize], c: &[usize], exps: &[Exponent]) -> f64 {
    fn rec(
        k: usize,
        fixed: &mut Vec<usize>,
        mags: &[f64],
        shape: &[usize],
        c: &[usize],
        exps: &[Exponent],
    ) -> f64 {
        if k == 0 {
            let mut original = vec![0; shape.len()];
            for (pos, &i) in fixed.iter().enumerate() {
                original[c[pos] - 1] = i;
            }
            let flat = original
                .iter()
                .zip(shape)
                .fold(0, |acc, (&i, &len)| acc * len + i);
            return mags[flat];
        }
        let axis = c[k - 1] - 1;
        let mut inner = Vec::with_capacity(shape[axis]);
        for i in 0..shape[axis] {
            fixed[k - 1] = i;
            inner.push(rec(k - 1, fixed, mags, shape, c, exps));
        }
        match exps[k - 1] {
            Exponent::Infinite => inner.into_iter().fold(0.0, f64::max),
            Exponent::Finite(p) => inner.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p),
        }
    }
    let mut fixed = vec![0; shape.len()];
    rec(shape.len(), &mut fixed, mags, shape, c, exps)
}

fn random_permutation(rng: &mut ChaCha8Rng, m: usize) -> Vec<usize> {
    let mut v: Vec<usize> = (1..=m).collect();
    for i in (1..m).rev() {
        v.swap(i, rng.random_range(0..=i));
    }
    v
}

fn random_exponents(rng: &mut ChaCha8Rng, m: usize) -> Vec<Exponent> {
    (0..m)
        .map(|_| match rng.random_range(0..4) {
            0 => Exponent::Infinite,
            1 => Exponent::Finite(1.0),
            2 => Exponent::Finite(2.0),
            _ => Exponent::Finite(1.0 + 3.0 * rng.random::<f64>()),
        })
        .collect()
}

/// Class membership straight from the definitions: the set of original axes
/// sitting at each block of positions.
fn oracle_classes(c: &[usize]) -> Vec<PermutationClass> {
    let at = |positions: &[usize]| -> Vec<usize> {
        let mut v: Vec<usize> = positions.iter().map(|&j| c[j - 1]).collect();
        v.sort_unstable();
        v
    };
    let mut out = Vec::new();
    if c.len() == 4 {
        if at(&[1, 2]) == [1, 3] && at(&[3, 4]) == [2, 4] {
            out.push(PermutationClass::FirstSlice);
        }
        if at(&[1, 2]) == [2, 4] && at(&[3, 4]) == [1, 3] {
            out.push(PermutationClass::SecondSlice);
        }
    } else {
        let tail = at(&[5]) == [3] && at(&[6]) == [6];
        if tail && at(&[1, 2]) == [1, 4] && at(&[3, 4]) == [2, 5] {
            out.push(PermutationClass::FirstFioSlice);
        }
        if tail && at(&[1, 2]) == [2, 5] && at(&[3, 4]) == [1, 4] {
            out.push(PermutationClass::SecondFioSlice);
        }
        let ends = at(&[1]) == [6] && at(&[6]) == [3];
        if ends && at(&[2, 3]) == [1, 4] && at(&[4, 5]) == [2, 5] {
            out.push(PermutationClass::FirstFioSymbol);
        }
        if ends && at(&[2, 3]) == [2, 5] && at(&[4, 5]) == [1, 4] {
            out.push(PermutationClass::SecondFioSymbol);
        }
    }
    out
}

fn criterion_3() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut worst = 0.0f64;
    let mut arrays = 0;
    for rank in [4, 6] {
        for _ in 0..10 {
            let c = random_permutation(&mut rng, rank);
            let exps = random_exponents(&mut rng, rank);
            let perm = Permutation::new(c.clone()).unwrap();
            let ev = ExponentVector::new(exps.clone()).unwrap();
            for _ in 0..10 {
                let shape: Vec<usize> = (0..rank).map(|_| rng.random_range(2..=4)).collect();
                let len: usize = shape.iter().product();
                let data: Vec<C64> = (0..len).map(|_| gaussian(&mut rng)).collect();
                let mags: Vec<f64> = data.iter().map(|v| v.norm()).collect();
                let got = mixed_norm(&data, &shape, &perm, &ev).unwrap();
                let want = oracle_mixed_norm(&mags, &shape, &c, &exps);
                worst = worst.max((got - want).abs() / want);
                arrays += 1;
            }
        }
    }

    let mut mismatches = 0;
    let mut counts = std::collections::BTreeMap::new();
    for m in [4, 6] {
        for perm in Permutation::all(m) {
            let expected = oracle_classes(perm.image());
            let got: Vec<PermutationClass> = classify_permutation(&perm, 1)
                .unwrap()
                .into_iter()
                .collect();
            if got != expected {
                mismatches += 1;
            }
            for class in expected {
                *counts.entry(class.label()).or_insert(0) += 1;
            }
        }
    }
    let counts_ok = counts.len() == 6 && counts.values().all(|&v| v == 4);
    check(
        worst <= 1e-12 && mismatches == 0 && counts_ok && arrays == 200,
        format!("{arrays} arrays, max rel err {worst:.1e}; {mismatches} class mismatches; class counts {counts:?}"),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut worst = 0.0f64;
    for n in [8, 16] {
        let scale = 1.0 / (n as f64).sqrt();
        for _ in 0..3 {
            let a = random_symbol(&mut rng, n, 2);
            let phi = random_phase(&mut rng, n, 2);
            let easy = build_easy_fio(&a, &phi).unwrap();

            let mut naive = vec![C64::new(0.0, 0.0); n * n];
            for x in 0..n {
                for t in 0..n {
                    for xi in 0..n {
                        let theta = 2.0 * PI * (phi.get(&[x, xi]) - (xi * t) as f64 / n as f64);
                        naive[x * n + t] += a.get(&[x, xi]) * cis(theta) * scale;
                    }
                }
            }
            worst = worst.max(
                easy.max_abs_diff(&OperatorMatrix::from_row_major(n, &naive).unwrap())
                    .unwrap(),
            );

            let k = easy_kernel(&a, &phi).unwrap();
            let factored = OperatorMatrix::from_row_major(n, k.values())
                .unwrap()
                .compose(&OperatorMatrix::dft(n).unwrap())
                .unwrap();
            worst = worst.max(easy.max_abs_diff(&factored).unwrap());

            let b = SymbolTable::from_fn(n, 3, |w| a.get(&[w[0], w[2]])).unwrap();
            let psi = PhaseTable::from_fn(n, 3, |w| {
                phi.get(&[w[0], w[2]]) - (w[1] * w[2]) as f64 / n as f64
            })
            .unwrap();
            worst = worst.max(
                build_hard_fio(&b, &psi)
                    .unwrap()
                    .max_abs_diff(&easy)
                    .unwrap(),
            );

            let b = random_symbol(&mut rng, n, 3);
            let psi = random_phase(&mut rng, n, 3);
            let hard = build_hard_fio(&b, &psi).unwrap();
            let mut naive = vec![C64::new(0.0, 0.0); n * n];
            for x in 0..n {
                for y in 0..n {
                    for xi in 0..n {
                        naive[x * n + y] +=
                            b.get(&[x, y, xi]) * cis(2.0 * PI * psi.get(&[x, y, xi])) * scale;
                    }
                }
            }
            worst = worst.max(
                hard.max_abs_diff(&OperatorMatrix::from_row_major(n, &naive).unwrap())
                    .unwrap(),
            );
        }
    }
    check(worst <= 1e-12, format!("max entrywise err {worst:.1e}"))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for n in [8usize, 16] {
        let f = random_signal(&mut rng, n, 1);
        let g = random_signal(&mut rng, n, 1);
        // e^{pi i M t^2 / n} depends on M only mod 2n.
        for m in 0..2 * n as i64 {
            let lhs = naive_stft(&apply_chirp(&f, &[vec![m]]).unwrap(), &g);
            let rhs = naive_stft(&f, &apply_chirp(&g, &[vec![-m]]).unwrap());
            for k in 0..n {
                for l in 0..n {
                    let shifted = (l as i64 - m * k as i64).rem_euclid(n as i64) as usize;
                    worst = worst.max((lhs[k * n + l].norm() - rhs[k * n + shifted].norm()).abs());
                }
            }
            cases += 1;
        }
    }
    check(
        worst <= 1e-12,
        format!("{cases} (n, M) cases, max defect {worst:.1e}"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let n = 8;
    let systems = [
        GaborSystem::full(FiniteSignal::delta(n, 1, &[0]).unwrap()).unwrap(),
        {
            let sys = GaborSystem::new(periodized_gaussian(n).unwrap(), 2, 2).unwrap();
            sys.with_window(canonical_tight_window(&sys).unwrap())
                .unwrap()
        },
    ];
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let b = random_symbol(&mut rng, n, 3);
        let psi = random_phase(&mut rng, n, 3);
        let direct = build_hard_fio(&b, &psi).unwrap();
        for sys in &systems {
            let family = fio_slice_family(&b, &psi, sys).unwrap();
            worst = worst.max(family.recombine().unwrap().max_abs_diff(&direct).unwrap());
        }
    }
    check(
        worst <= 1e-10,
        format!("10 symbols x 2 frames, max residual {worst:.1e}"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut frob = 0.0f64;
    let mut pair_excess = f64::NEG_INFINITY;
    let mut slack = f64::INFINITY;
    for i in 0..50 {
        let n = 3 + i % 6;
        let a = random_matrix(&mut rng, n);
        let direct = a.entries().iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        frob = frob.max((schatten_norm(&a, Exponent::Finite(2.0)).unwrap() - direct).abs());

        let s1 = schatten_norm(&a, Exponent::Finite(1.0)).unwrap();
        let s2 = schatten_norm(&a, Exponent::Finite(2.0)).unwrap();
        for p in [1.25, 1.5, 1.75] {
            let sp = schatten_norm(&a, Exponent::Finite(p)).unwrap();
            slack = slack.min(s1.powf(2.0 / p - 1.0) * s2.powf(2.0 - 2.0 / p) - sp);
        }

        if i < 5 {
            let p = Exponent::Finite(1.0 + rng.random::<f64>());
            let bound = schatten_norm(&a, p).unwrap();
            for _ in 0..100 {
                let u = random_matrix(&mut rng, n).into_entries().qr().q();
                let v = random_matrix(&mut rng, n).into_entries().qr().q();
                let count = rng.random_range(1..=n);
                let cols = |m: &DMatrix<C64>| -> Vec<FiniteSignal> {
                    (0..count)
                        .map(|k| {
                            FiniteSignal::new(n, 1, m.column(k).iter().copied().collect()).unwrap()
                        })
                        .collect()
                };
                let value = pair_functional(&a, &cols(&u), &cols(&v), p).unwrap();
                pair_excess = pair_excess.max(value - bound);
            }
        }
    }
    check(
        frob <= 1e-12 && pair_excess <= 1e-10 && slack >= -1e-10,
        format!("|S2 - Frobenius| {frob:.1e}, max pair excess {pair_excess:.1e}, min interpolation slack {slack:.2e}"),
    )
}

fn criterion_8() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for theorem in [
        TheoremId::T29,
        TheoremId::T31,
        TheoremId::T32,
        TheoremId::T44a,
        TheoremId::T44b,
    ] {
        let mut cfg = ExperimentConfig::new(theorem, vec![8, 12, 16], 1.5, 50, 2024);
        cfg.window_kind = WindowKind::GaussianSampled;
        let report = ratio_experiment(&cfg).map_err(|e| e.to_string())?;
        ok &= report.check.passed && report.growth_factor <= 4.0;
        lines.push(format!("{theorem} growth {:.3}", report.growth_factor));
    }
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(600);
    check(
        ok,
        format!("{}; {:.0} s", lines.join(", "), elapsed.as_secs_f64()),
    )
}

fn criterion_9() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (theorem, perm) in [
        (TheoremId::SharpT43, "2,5,1,4,3,6"),
        (TheoremId::SharpT44, "6,1,4,2,5,3"),
    ] {
        let mut cfg = ExperimentConfig::new(theorem, vec![8, 16, 32], 2.0, 5, 77);
        cfg.permutation = Some(perm.parse().unwrap());
        let report = sharpness_experiment(&cfg).map_err(|e| e.to_string())?;
        let control = report.check.control_growth_factor.unwrap_or(f64::INFINITY);
        ok &= report.growth_factor >= 3.5 && report.check.non_decreasing && control <= 1.5;
        lines.push(format!(
            "{theorem} violated growth {:.3}, control growth {control:.3}",
            report.growth_factor
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(109);
    let n = 8;
    let window = make_window(WindowKind::GaussianSampled, n, 0).unwrap();
    let mut worst = 0.0f64;
    for (c, e) in [
        ("2,5,1,4,3,6", "2,2,2,2,1,inf"),
        ("6,1,4,2,5,3", "inf,2,2,1.5,1.5,1"),
        ("1,4,2,5,3,6", "2,2,1,1,1,inf"),
    ] {
        let c: Permutation = c.parse().unwrap();
        let e: ExponentVector = e.parse().unwrap();
        let b = random_symbol(&mut rng, n, 3);
        let q: Vec<i64> = (0..3).map(|_| rng.random_range(-4..=4)).collect();
        let affine = QuadraticPhase::new(rng.random::<f64>(), q, vec![vec![0; 3]; 3]).unwrap();
        let modulated = b
            .modulated(&quadratic_phase_table(&affine, n, 3).unwrap())
            .unwrap();
        let lhs = mixed_modulation_norm(modulated.as_signal(), &window, &c, &e).unwrap();
        let rhs = mixed_modulation_norm(b.as_signal(), &window, &c, &e).unwrap();
        worst = worst.max((lhs - rhs).abs() / rhs);
    }
    ok &= worst <= 1e-10;
    lines.push(format!("absorption rel err {worst:.1e}"));
    check(ok, lines.join("; "))
}

fn criterion_10() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut bodies = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("run{run}.csv"));
        let argv = [
            "fiolab",
            "verify",
            "--theorem",
            "T3.2",
            "--n",
            "8,12",
            "--p",
            "1.5",
            "--trials",
            "5",
            "--seed",
            "42",
            "--perm",
            "2,5,1,4,3,6",
            "--out",
        ];
        let mut args: Vec<String> = argv.iter().map(|s| s.to_string()).collect();
        args.push(path.display().to_string());
        let code = run_cli_with(args, &mut Vec::new(), &mut Vec::new());
        if code != 0 {
            return Err(format!("verify exited with {code}"));
        }
        bodies.push(std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    let rows = String::from_utf8_lossy(&bodies[0]).lines().count() - 1;
    check(
        bodies[0] == bodies[1] && rows == 10,
        format!("{rows} rows, identical bodies: {}", bodies[0] == bodies[1]),
    )
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("Moyal/Parseval suite", criterion_1),
        ("frame suite", criterion_2),
        ("mixed-norm oracle and classification", criterion_3),
        ("FIO consistency", criterion_4),
        ("chirp covariance", criterion_5),
        ("slicing decomposition", criterion_6),
        ("Schatten suite", criterion_7),
        ("theorem ratio trends", criterion_8),
        ("sharpness", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
