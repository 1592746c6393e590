//! The nine acceptance criteria at their stated tolerances.
//!
//! `cargo test -p mfcross-validation --test acceptance [-- <number|name>]`

#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::f64::consts::LN_2;
use std::path::Path;
use std::process::ExitCode;
use std::time::Duration;

use clap::Parser;
use mfcross::c64;
use mfcross::crossover::{
    d_q_crossover, d_q_oe, d_q_ue, ks_critical_value, moment_crossover, pdf_crossover, pdf_crossover_log,
    pdf_oe_asymptotic, pdf_ue_asymptotic, s_q_inf_oe, s_q_inf_ue, ComponentLaw, CrossoverParam, LawTable,
};
use mfcross::ensembles::{ensemble_member, map_members, EnsembleSpec};
use mfcross::estimators::{
    ensemble_avg_from_summaries, fit_epsilon_accumulated, spectral_profile_from_summaries, FitAccumulator,
    MemberSummary, StateWindow, DEFAULT_BRACKET,
};
use mfcross::linalg::{eigh, eigh_real, eigvalsh_real, hermiticity_error, unitarity_error, unitary_eigs};
use mfcross::models::{
    billiard_hamiltonian, dos_histogram, qkr_floquet, spin_basis, spin_chain_block, spin_fields, BilliardSpec, QkrSpec,
    SpinChainSpec,
};
use mfcross::specfun::{digamma, integrate_adaptive_with, integrate_semi_infinite, QuadOptions, EULER_GAMMA};
use mfcross_validation::{run_all, Criterion, Report};

const Q12: [f64; 2] = [1.0, 2.0];

fn eps(e: f64) -> CrossoverParam {
    CrossoverParam::new(e).unwrap()
}

// 1. Closed forms against hand-simplified identities.
fn closed_forms(r: &mut Report) {
    for n in [3usize, 10, 101, 1000, 1716, 100_000] {
        let nf = n as f64;
        // D̃₂ = −ln Ĩ₂ / ln N
        let i2_oe = (-d_q_oe(2.0, n).unwrap().value * nf.ln()).exp();
        let i2_ue = (-d_q_ue(2.0, n).unwrap().value * nf.ln()).exp();
        r.close(&format!("I2 OE, N={n}"), i2_oe, 3.0 / (nf + 2.0), 1e-10);
        r.close(&format!("I2 UE, N={n}"), i2_ue, 2.0 / (nf + 1.0), 1e-10);
    }
    r.close("S2 inf OE", s_q_inf_oe(2.0).unwrap(), 3f64.ln(), 1e-10);
    r.close("S2 inf UE", s_q_inf_ue(2.0).unwrap(), LN_2, 1e-10);
    // ψ(3/2) = 2 − γ − 2 ln 2
    r.close("S1 inf OE", s_q_inf_oe(1.0).unwrap(), 2.0 - EULER_GAMMA - LN_2, 1e-10);
    r.close("S1 inf OE numeric", s_q_inf_oe(1.0).unwrap(), 0.72964, 1e-5);
    r.close("S1 inf UE", s_q_inf_ue(1.0).unwrap(), 1.0 - EULER_GAMMA, 1e-10);
    // D̃₁,UE ln N = ψ(N+1) − ψ(2) with ψ(N+1) = −γ + H_N
    for n in [10usize, 1000] {
        let h: f64 = (1..=n).map(|k| 1.0 / k as f64).sum();
        let d1 = d_q_ue(1.0, n).unwrap().value * (n as f64).ln();
        r.close(&format!("D1 UE ln N, N={n}"), d1, h - 1.0, 1e-10);
    }
    let d1_oe = d_q_oe(1.0, 1000).unwrap().value * 1000f64.ln();
    r.close(
        "D1 OE ln N, N=1000",
        d1_oe,
        digamma(501.0).unwrap() - digamma(1.5).unwrap(),
        1e-10,
    );
}

// 2. Quadrature consistency of the crossover density.
fn crossover_quadrature(r: &mut Report) {
    let opts = QuadOptions::new(1e-11, 1e-10);
    for e in [0.1, 1.0, 4.0, 10.0, 100.0] {
        let p = eps(e);
        let norm = integrate_semi_infinite(
            |x| pdf_crossover(p, x).unwrap(),
            0.0,
            &[0.01, 0.1, 1.0, 3.0, 10.0, 30.0],
            &opts,
        )
        .unwrap()
        .value;
        let ys = [-45.0, -10.0, -3.0, 0.0, 2.0, 3.5, 5.0];
        let norm_y = integrate_adaptive_with(|y| pdf_crossover_log(p, y).unwrap(), &ys, &opts)
            .unwrap()
            .value;
        let mean_y = integrate_adaptive_with(|y| y.exp() * pdf_crossover_log(p, y).unwrap(), &ys, &opts)
            .unwrap()
            .value;
        r.close(&format!("eps={e}: ∫P dx"), norm, 1.0, 1e-6);
        r.close(&format!("eps={e}: ∫P dy (log variable)"), norm_y, 1.0, 1e-6);
        r.close(&format!("eps={e}: <x> by direct quadrature"), mean_y, 1.0, 1e-6);
        r.close(
            &format!("eps={e}: <x> from moment routine"),
            moment_crossover(p, 1.0).unwrap(),
            1.0,
            1e-6,
        );
    }
    let grid: Vec<f64> = (0..=400).map(|i| 0.05 + (8.0 - 0.05) * i as f64 / 400.0).collect();
    let sup = |e: f64, limit: fn(f64) -> f64| {
        grid.iter()
            .map(|&x| ((pdf_crossover(eps(e), x).unwrap() - limit(x)).abs(), x))
            .fold((0.0f64, 0.0), |a, b| if b.0 > a.0 { b } else { a })
    };
    let (g_oe, x_oe) = sup(1e-4, pdf_oe_asymptotic);
    let (g_ue, x_ue) = sup(1e4, pdf_ue_asymptotic);
    r.check(
        format!("eps=1e-4 vs OE: sup gap {g_oe:.3e} at x={x_oe:.3} <= 2e-3"),
        g_oe <= 2e-3,
    );
    r.check(
        format!("eps=1e4 vs UE: sup gap {g_ue:.3e} at x={x_ue:.3} <= 2e-3"),
        g_ue <= 2e-3,
    );
}

// 3. Pandey–Mehta ensembles against the semi-analytic dimensions.
fn monte_carlo(r: &mut Report) {
    let n = 1000;
    for (k, alpha) in [0.0, 0.03, 0.095, 1.0].into_iter().enumerate() {
        let spec = EnsembleSpec::new(n, alpha, 50, 300 + k as u64).unwrap();
        let e = spec.epsilon().epsilon;
        let members = map_members(spec.n_members, |m| {
            let sys = ensemble_member(&spec, m)?;
            let summary = MemberSummary::new(&sys, &Q12)?;
            // one component per eigenvector keeps the samples nearly independent
            let ys: Vec<f64> = (0..n)
                .map(|j| {
                    let c = sys.eigenvector(j)[j];
                    ((c.re * c.re + c.im * c.im) * n as f64).ln()
                })
                .collect();
            Ok((summary, ys))
        })
        .unwrap();
        let (summaries, ys): (Vec<_>, Vec<_>) = members.into_iter().unzip();
        let avg = ensemble_avg_from_summaries(&summaries, StateWindow::All).unwrap();
        for (i, q) in Q12.iter().enumerate() {
            let got = avg[i].d_q;
            let (want, tol, what) = if alpha == 0.0 {
                (d_q_oe(*q, n).unwrap().value, 0.005, "OE")
            } else if alpha == 1.0 {
                (d_q_ue(*q, n).unwrap().value, 0.005, "UE")
            } else {
                (d_q_crossover(eps(e), *q, n).unwrap().value, 0.01, "crossover")
            };
            r.close(&format!("alpha={alpha} eps={e:.3}: D{q} vs {what}"), got, want, tol);
        }
        let mut pooled: Vec<f64> = ys.into_iter().flatten().collect();
        pooled.sort_by(f64::total_cmp);
        let table = LawTable::with_defaults(ComponentLaw::for_epsilon(e).unwrap()).unwrap();
        let ks = table.ks_statistic(&pooled).unwrap();
        let crit = ks_critical_value(pooled.len(), 0.01);
        r.check(
            format!("alpha={alpha}: KS {ks:.5} < {crit:.5} (n={})", pooled.len()),
            ks < crit,
        );
    }
}

// 4. OE ≤ crossover ≤ UE and monotone decrease in q.
fn squeeze(r: &mut Report) {
    let n = 1000;
    let qs: Vec<f64> = (1..=6).map(f64::from).collect();
    let oe: Vec<f64> = qs.iter().map(|&q| d_q_oe(q, n).unwrap().value).collect();
    let ue: Vec<f64> = qs.iter().map(|&q| d_q_ue(q, n).unwrap().value).collect();
    let monotone = |v: &[f64]| v.windows(2).all(|w| w[1] <= w[0]);
    r.check(format!("OE non-increasing: {oe:.5?}"), monotone(&oe));
    r.check(format!("UE non-increasing: {ue:.5?}"), monotone(&ue));
    for e in [1.0, 4.0, 10.0] {
        let cr: Vec<f64> = qs.iter().map(|&q| d_q_crossover(eps(e), q, n).unwrap().value).collect();
        let inside = (0..qs.len()).all(|i| oe[i] <= cr[i] && cr[i] <= ue[i]);
        r.check(format!("eps={e}: OE <= crossover <= UE for q=1..6"), inside);
        r.check(format!("eps={e}: crossover non-increasing: {cr:.5?}"), monotone(&cr));
    }
}

// 5. Maximum-likelihood recovery of ε.
fn epsilon_recovery(r: &mut Report) {
    let n = 400;
    for (k, e) in [1.0, 3.6, 10.0].into_iter().enumerate() {
        let mut hits = 0;
        let mut worst = 0.0f64;
        for t in 0..20u64 {
            let spec = EnsembleSpec::new(n, (e / n as f64).sqrt(), 8, 5000 + 100 * k as u64 + t).unwrap();
            let accs = map_members(spec.n_members, |m| {
                let sys = ensemble_member(&spec, m)?;
                let mut acc = FitAccumulator::new();
                for j in 0..n {
                    acc.add_vector(sys.eigenvector(j))?;
                }
                Ok(acc)
            })
            .unwrap();
            let mut acc = FitAccumulator::new();
            for a in &accs {
                acc.merge(a);
            }
            let fit = fit_epsilon_accumulated(&acc, DEFAULT_BRACKET).unwrap();
            let rel = fit.eps_hat / e - 1.0;
            worst = worst.max(rel.abs());
            if rel.abs() <= 0.3 {
                hits += 1;
            }
        }
        r.check(
            format!("eps={e}: {hits}/20 fits within 30% (worst {:.1}%)", 100.0 * worst),
            hits >= 19,
        );
    }
}

// 6. Kicked rotor endpoints.
fn kicked_rotor(r: &mut Report) {
    for (gamma, oe_end) in [(0.0, true), (0.05, false)] {
        let spec = QkrSpec {
            trs_gamma: gamma,
            n_members: 100,
            seed: 6,
            ..Default::default()
        };
        let n = spec.n_dim;
        let out = map_members(spec.n_members, |m| {
            let u = qkr_floquet(&spec, m)?;
            let dev = unitarity_error(u.as_ref());
            let sys = unitary_eigs(u.as_ref())?;
            Ok((dev, MemberSummary::new(&sys, &Q12)?))
        })
        .unwrap();
        let max_dev = out.iter().map(|o| o.0).fold(0.0, f64::max);
        r.check(
            format!("gamma={gamma}: max unitarity deviation {max_dev:.2e} <= 1e-10"),
            max_dev <= 1e-10,
        );
        let summaries: Vec<MemberSummary> = out.into_iter().map(|o| o.1).collect();
        let (d1, _) = spectral_profile_from_summaries(&summaries).unwrap().mean_over(0..n);
        let (want, what) = if oe_end {
            (d_q_oe(1.0, n), "OE")
        } else {
            (d_q_ue(1.0, n), "UE")
        };
        r.close(
            &format!("gamma={gamma}: profile mean D1 vs {what}"),
            d1,
            want.unwrap().value,
            0.01,
        );
    }
}

// 7. Billiard geometry, density of states and the field-induced shift of D₂.
fn billiard(r: &mut Report) {
    let spec = BilliardSpec::default();
    let h = billiard_hamiltonian(&spec).unwrap();
    r.check(format!("default geometry has {} sites", h.dim()), h.dim() == 6096);
    let dense = h.to_dense();
    let imag = (0..h.dim())
        .flat_map(|i| (0..h.dim()).map(move |j| (i, j)))
        .map(|(i, j)| dense[(i, j)].im.abs())
        .fold(0.0, f64::max);
    r.check(
        format!(
            "B=0 Hamiltonian real (max |Im| {imag:e}) and symmetric (error {:e})",
            hermiticity_error(dense.as_ref())
        ),
        imag == 0.0 && hermiticity_error(dense.as_ref()) == 0.0,
    );
    drop(dense);
    let evals = eigvalsh_real(h.to_dense_real().as_ref()).unwrap();
    let rows = dos_histogram(&evals, spec.onsite - 4.0, spec.onsite + 4.0, 0.2).unwrap();
    let (mut used, mut worst, mut at) = (0, 0.0f64, 0.0);
    for row in &rows {
        // whole bin inside the shell 0.5 < |E−4| < 3.5
        let (lo, hi) = ((row.energy - 4.0).abs() - 0.1, (row.energy - 4.0).abs() + 0.1);
        if lo < 0.5 - 1e-9 || hi > 3.5 + 1e-9 {
            continue;
        }
        used += 1;
        let rel = (row.rho_emp - row.rho_theory).abs() / row.rho_theory;
        if rel > worst {
            (worst, at) = (rel, row.energy);
        }
    }
    r.check(
        format!(
            "DOS: worst relative error {:.2}% at E={at:.1} over {used} bins",
            100.0 * worst
        ),
        used > 0 && worst <= 0.05,
    );

    let window = StateWindow::EnergyShell {
        centre: 4.0,
        min_offset: 0.5,
        max_offset: 2.5,
    };
    let mut d2 = Vec::new();
    for b in [0.0, 0.02] {
        let spec = BilliardSpec {
            b_field: b,
            ..BilliardSpec::reduced()
        };
        let h = billiard_hamiltonian(&spec).unwrap();
        let summary = if b == 0.0 {
            let (vals, vecs) = eigh_real(h.to_dense_real().as_ref()).unwrap();
            MemberSummary::from_weights(vals, h.dim(), &Q12, |j| {
                Ok((0..h.dim()).map(|i| vecs[(i, j)] * vecs[(i, j)]).collect())
            })
        } else {
            MemberSummary::new(&eigh(h.to_dense().as_ref()).unwrap(), &Q12)
        }
        .unwrap();
        let avg = ensemble_avg_from_summaries(&[summary], window).unwrap()[1];
        r.note(format!(
            "reduced B={b}: D2 {:.5} ± {:.1e} over {} states",
            avg.d_q, avg.std_error, avg.n_states
        ));
        d2.push((avg, h.dim()));
    }
    let ((a0, n_dim), (a1, _)) = (d2[0], d2[1]);
    let (oe, ue) = (d_q_oe(2.0, n_dim).unwrap().value, d_q_ue(2.0, n_dim).unwrap().value);
    r.note(format!("N={n_dim}: OE line {oe:.5}, UE line {ue:.5}"));
    let shift = a1.d_q - a0.d_q;
    let sigma = (a0.std_error.powi(2) + a1.std_error.powi(2)).sqrt();
    r.check(
        format!("D2 shift {shift:.4} > 5 sigma = {:.4}", 5.0 * sigma),
        shift > 5.0 * sigma,
    );
    r.check(
        "B=0.02 sits closer to the UE line than B=0",
        (a1.d_q - ue).abs() < (a0.d_q - ue).abs() && (a0.d_q - oe).abs() < (a0.d_q - ue).abs(),
    );
}

// Full 2^L spin Hamiltonian element by element from the Pauli matrices.
fn spin_oracle(l: usize, jc: f64, k: f64, fields: &[f64], row: u32, col: u32) -> c64 {
    let z = c64::new(0.0, 0.0);
    let half = c64::new(0.5, 0.0);
    let ih = c64::new(0.0, 0.5);
    // single-site basis (up, down)
    let s = [[[z, half], [half, z]], [[z, -ih], [ih, z]], [[half, z], [z, -half]]];
    let local = |state: u32, site: usize| 1 - (state >> site & 1) as usize;
    let elem = |ops: &[(usize, usize)]| -> c64 {
        let mask: u32 = ops.iter().map(|&(site, _)| 1u32 << site).sum();
        if (row ^ col) & !mask != 0 {
            return z;
        }
        ops.iter().fold(c64::new(1.0, 0.0), |acc, &(site, a)| {
            acc * s[a][local(row, site)][local(col, site)]
        })
    };
    const LEVI: [(usize, usize, usize, f64); 6] = [
        (0, 1, 2, 1.0),
        (1, 2, 0, 1.0),
        (2, 0, 1, 1.0),
        (0, 2, 1, -1.0),
        (2, 1, 0, -1.0),
        (1, 0, 2, -1.0),
    ];
    let mut h = z;
    for j in 0..l {
        let (j1, j2) = ((j + 1) % l, (j + 2) % l);
        for a in 0..3 {
            h += elem(&[(j, a), (j1, a)]) * jc;
        }
        h += elem(&[(j, 2)]) * fields[j];
        for (a, b, c, sign) in LEVI {
            h += elem(&[(j, a), (j1, b), (j2, c)]) * (k * sign);
        }
    }
    h
}

// 8. Spin chain sector, operator checks and the chirality-driven crossover.
fn spin_chain(r: &mut Report) {
    let base = SpinChainSpec {
        seed: 8,
        ..Default::default()
    };
    r.check(
        format!("L=13, Sz=1/2 block dimension {}", spin_basis(&base).unwrap().len()),
        spin_basis(&base).unwrap().len() == 1716,
    );
    let mut worst = 0.0f64;
    for (k, sz) in [(0.0, 0.0), (0.6, 0.0), (0.6, 1.0), (1.3, -1.0)] {
        let spec = SpinChainSpec {
            length: 4,
            k_chirality: k,
            sz_sector: sz,
            h_strength: 0.7,
            j_coupling: 0.9,
            seed: 3,
        };
        let basis = spin_basis(&spec).unwrap();
        let fields = spin_fields(&spec, 0);
        let block = spin_chain_block(&spec, 0).unwrap();
        for (i, &bi) in basis.iter().enumerate() {
            for (j, &bj) in basis.iter().enumerate() {
                let o = spin_oracle(4, spec.j_coupling, k, &fields, bi, bj);
                worst = worst.max((block[(i, j)] - o).norm());
            }
        }
    }
    r.check(
        format!("L=4 blocks vs tensor-product oracle: max deviation {worst:.1e} <= 1e-12"),
        worst <= 1e-12,
    );

    let n = 1716;
    let mut means = Vec::new();
    for k in [0.0, 0.01, 0.6] {
        let spec = SpinChainSpec { k_chirality: k, ..base };
        let h = spin_chain_block(&spec, 0).unwrap();
        let herm = hermiticity_error(h.as_ref());
        r.check(format!("K={k}: hermiticity error {herm:.1e} <= 1e-12"), herm <= 1e-12);
        let sys = eigh(h.as_ref()).unwrap();
        let summary = MemberSummary::new(&sys, &Q12).unwrap();
        let states = StateWindow::CentralFraction(0.2).select(&summary.eigenvalues).unwrap();
        let range = states[0]..states[states.len() - 1] + 1;
        let (d1, d2) = spectral_profile_from_summaries(&[summary]).unwrap().mean_over(range);
        r.note(format!("K={k}: central 20% mean D1 {d1:.4}, D2 {d2:.4}"));
        means.push((d1, d2));
    }
    let (ue1, ue2) = (d_q_ue(1.0, n).unwrap().value, d_q_ue(2.0, n).unwrap().value);
    r.check(
        "D1 ordering K=0 < K=0.01 < K=0.6",
        means[0].0 < means[1].0 && means[1].0 < means[2].0,
    );
    r.check(
        "D2 ordering K=0 < K=0.01 < K=0.6",
        means[0].1 < means[1].1 && means[1].1 < means[2].1,
    );
    r.close("K=0.6 D1 vs UE line", means[2].0, ue1, 0.05);
    r.close("K=0.6 D2 vs UE line", means[2].1, ue2, 0.05);
}

fn read_tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        files.insert(
            path.file_name().unwrap().to_string_lossy().into_owned(),
            std::fs::read(&path).unwrap(),
        );
    }
    files
}

fn run_cli(args: &[&str], out: &Path, threads: usize) -> bool {
    let threads = threads.to_string();
    let mut full = vec![
        "mfcross",
        "--seed",
        "9",
        "--threads",
        &threads,
        "--out",
        out.to_str().unwrap(),
    ];
    full.extend_from_slice(args);
    let cli = mfcross_cli::Cli::try_parse_from(full).unwrap();
    mfcross_cli::run(cli).is_ok()
}

// 9. Byte-identical outputs across thread counts.
fn determinism(r: &mut Report) {
    let runs: [&[&str]; 5] = [
        &["analytic", "--q-grid", "1,2,3", "--n-grid", "100,1000", "--eps", "1,10"],
        &["rmt", "--n-dim", "200", "--alpha", "0.1", "--members", "16"],
        &["qkr", "--n-dim", "101", "--members", "12", "--gamma", "0,0.05"],
        &[
            "billiard",
            "--width",
            "20",
            "--height",
            "22",
            "--ellipse-a",
            "11",
            "--ellipse-b",
            "9",
            "--b-field",
            "0,0.1",
        ],
        &[
            "spinchain",
            "--length",
            "10",
            "--sz-sector",
            "0",
            "--k",
            "0,0.6",
            "--realizations",
            "2",
        ],
    ];
    let tmp = tempfile::tempdir().unwrap();
    for (i, args) in runs.iter().enumerate() {
        let trees: Vec<_> = [1usize, 4]
            .iter()
            .map(|&t| {
                let out = tmp.path().join(format!("{i}_{t}"));
                let ok = run_cli(args, &out, t);
                (ok, read_tree(&out))
            })
            .collect();
        let ((ok1, a), (ok4, b)) = (&trees[0], &trees[1]);
        let diff: Vec<&String> = a
            .keys()
            .filter(|k| a.get(*k) != b.get(*k))
            .chain(b.keys().filter(|k| !a.contains_key(*k)))
            .collect();
        r.check(
            format!(
                "{}: {} files identical with 1 and 4 threads (differing: {diff:?})",
                args[0],
                a.len()
            ),
            *ok1 && *ok4 && !a.is_empty() && diff.is_empty(),
        );
    }
}

fn main() -> ExitCode {
    let minutes = |m: u64| Duration::from_secs(60 * m);
    let criteria = [
        Criterion {
            number: 1,
            name: "closed-form suite",
            budget: Duration::from_secs(1),
            run: closed_forms,
        },
        Criterion {
            number: 2,
            name: "crossover quadrature",
            budget: Duration::from_secs(30),
            run: crossover_quadrature,
        },
        Criterion {
            number: 3,
            name: "monte carlo vs analytic",
            budget: minutes(10),
            run: monte_carlo,
        },
        Criterion {
            number: 4,
            name: "squeeze and monotonicity",
            budget: minutes(1),
            run: squeeze,
        },
        Criterion {
            number: 5,
            name: "epsilon recovery",
            budget: minutes(10),
            run: epsilon_recovery,
        },
        Criterion {
            number: 6,
            name: "kicked rotor",
            budget: minutes(2),
            run: kicked_rotor,
        },
        Criterion {
            number: 7,
            name: "billiard",
            budget: minutes(15),
            run: billiard,
        },
        Criterion {
            number: 8,
            name: "spin chain",
            budget: minutes(10),
            run: spin_chain,
        },
        Criterion {
            number: 9,
            name: "determinism",
            budget: minutes(10),
            run: determinism,
        },
    ];
    // libtest-style flags such as --nocapture are ignored
    let filter = std::env::args().skip(1).find(|a| !a.starts_with('-'));
    if run_all(&criteria, filter.as_deref()) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
