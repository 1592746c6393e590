use std::path::Path;

use mfcross::crossover::{d_q_oe, d_q_ue, s_q_inf_crossover, CrossoverParam, FractalDimensionPoint};
use mfcross::ensembles::{ensemble_member, map_members, read_cache, CacheWriter, EnsembleSpec};
use mfcross::estimators::{fit_epsilon_accumulated, FitAccumulator};
use mfcross::linalg::{eigh, eigh_real, eigvalsh_real, hermiticity_error, unitarity_error, unitary_eigs};
use mfcross::models::{
    billiard_hamiltonian, dos_histogram, qkr_floquet, spin_basis, spin_chain_block, BilliardSpec, QkrSpec,
    SpinChainSpec,
};
use mfcross::Result;
use serde_json::{json, Map, Value};

use crate::analysis::{
    analyse_member, analyse_system, real_weights, write_outputs, Combined, MemberOut, RunInfo, BLOCK,
};
use crate::config::{
    AnalyticParams, BilliardParams, FitParams, Format, QkrParams, RmtParams, SampleKind, SpinChainParams,
};
use crate::error::{CliError, CliResult};
use crate::output::{suffix, Cell, Sink};

/// Run `member(m)` for every member in blocks, handing results to `sink` in
/// member order.
fn for_members<T, F, S>(n_members: usize, member: F, mut sink: S) -> Result<()>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
    S: FnMut(T) -> Result<()>,
{
    let mut start = 0;
    while start < n_members {
        let len = BLOCK.min(n_members - start);
        for item in map_members(len, |k| member(start + k).map_err(|e| e.for_member(start + k)))? {
            sink(item)?;
        }
        start += len;
    }
    Ok(())
}

fn require_grid<T>(name: &str, v: &[T]) -> CliResult<()> {
    if v.is_empty() {
        return Err(CliError::Config(format!("{name} must not be empty")));
    }
    Ok(())
}

pub fn analytic(p: &AnalyticParams, sink: &Sink) -> CliResult<()> {
    require_grid("q_grid", &p.q_grid)?;
    require_grid("n_grid", &p.n_grid)?;
    let mut rows: Vec<Vec<Cell>> = Vec::new();
    let mut failures: Vec<Value> = Vec::new();
    let mut total = 0usize;
    let mut emit = |family: &str, eps: f64, q: f64, n: usize, r: std::result::Result<FractalDimensionPoint, String>| {
        total += 1;
        match r {
            Ok(pt) => rows.push(vec![
                family.into(),
                eps.into(),
                q.into(),
                n.into(),
                pt.value.into(),
                pt.shifted_scaled().into(),
            ]),
            Err(e) => {
                eprintln!("warning: {family} eps={eps} q={q} N={n}: {e}");
                failures.push(json!({ "family": family, "eps": eps, "q": q, "N": n, "error": e }));
            }
        }
    };
    for &q in &p.q_grid {
        for &n in &p.n_grid {
            emit("OE", 0.0, q, n, d_q_oe(q, n).map_err(|e| e.to_string()));
        }
    }
    for &q in &p.q_grid {
        for &n in &p.n_grid {
            emit("UE", f64::INFINITY, q, n, d_q_ue(q, n).map_err(|e| e.to_string()));
        }
    }
    // S̃_q^∞ does not depend on N, so each (ε, q) pair is integrated once.
    let pairs: Vec<(f64, f64)> = p
        .eps_list
        .iter()
        .flat_map(|&e| p.q_grid.iter().map(move |&q| (e, q)))
        .collect();
    let limits = map_members(pairs.len(), |k| {
        let (e, q) = pairs[k];
        Ok(CrossoverParam::new(e)
            .and_then(|e| s_q_inf_crossover(e, q))
            .map_err(|e| e.to_string()))
    })?;
    for (&(e, q), s) in pairs.iter().zip(limits) {
        for &n in &p.n_grid {
            let point = match &s {
                Ok(s) if n >= 3 => Ok(FractalDimensionPoint {
                    q,
                    n_dim: n,
                    value: 1.0 - s / (n as f64).ln(),
                }),
                Ok(_) => Err(format!("N = {n} must be at least 3")),
                Err(err) => Err(err.clone()),
            };
            emit("crossover", e, q, n, point);
        }
    }
    sink.table("analytic_dq", &["family", "eps", "q", "N", "Dq", "Sq"], &rows)?;
    if !failures.is_empty() {
        sink.json("analytic_failures", json!({ "failed_rows": failures }))?;
        return Err(CliError::PartialFailure {
            failed: failures.len(),
            total,
        });
    }
    Ok(())
}

pub fn rmt(p: &RmtParams, seed: u64, sink: &Sink) -> CliResult<()> {
    let mut spec = EnsembleSpec::new(p.n_dim, p.alpha, p.members, seed)?;
    if let Some(v2) = p.v2 {
        spec = spec.with_v2(v2)?;
    }
    let opts = &p.analysis;
    let mut cache = match &p.cache {
        Some(path) => Some(CacheWriter::create(path, &spec)?),
        None => None,
    };
    let keep = cache.is_some();
    let mut combined = Combined::default();
    for_members(
        spec.n_members,
        |m| {
            let sys = ensemble_member(&spec, m)?;
            let out = analyse_system(&sys, opts)?;
            Ok((keep.then_some(sys), out))
        },
        |(sys, out)| {
            if let (Some(w), Some(sys)) = (cache.as_mut(), sys) {
                w.push(&sys)?;
            }
            combined.push(out);
            Ok(())
        },
    )?;
    if let Some(w) = cache {
        w.finish()?;
    }
    let info = RunInfo {
        suffix: "",
        eps_true: Some(spec.epsilon().epsilon),
        parameter: None,
        checks: Map::new(),
    };
    write_outputs(sink, &combined, opts, info)
}

pub fn qkr(p: &QkrParams, seed: u64, sink: &Sink) -> CliResult<()> {
    require_grid("gamma", &p.gamma)?;
    let opts = &p.analysis;
    for &gamma in &p.gamma {
        let spec = QkrSpec {
            n_dim: p.n_dim,
            kick_strength: p.kick_strength,
            trs_gamma: gamma,
            theta0: p.theta0,
            n_members: p.members,
            kick_jitter: p.kick_jitter,
            seed,
        };
        spec.validate()?;
        let mut combined = Combined::default();
        let mut max_dev = 0.0f64;
        for_members(
            spec.n_members,
            |m| {
                let u = qkr_floquet(&spec, m)?;
                let dev = unitarity_error(u.as_ref());
                let sys = unitary_eigs(u.as_ref())?;
                Ok((dev, analyse_system(&sys, opts)?))
            },
            |(dev, out): (f64, MemberOut)| {
                max_dev = max_dev.max(dev);
                combined.push(out);
                Ok(())
            },
        )?;
        let mut checks = Map::new();
        checks.insert("max_unitarity_deviation".into(), json!(max_dev));
        let sfx = suffix("gamma", gamma, p.gamma.len());
        let info = RunInfo {
            suffix: &sfx,
            eps_true: None,
            parameter: Some(("gamma", gamma)),
            checks,
        };
        write_outputs(sink, &combined, opts, info)?;
    }
    Ok(())
}

pub fn billiard(p: &BilliardParams, sink: &Sink) -> CliResult<()> {
    require_grid("b_field", &p.b_field)?;
    let opts = &p.analysis;
    let base = BilliardSpec {
        rect_width: p.width,
        rect_height: p.height,
        ellipse_a: p.ellipse_a,
        ellipse_b: p.ellipse_b,
        onsite: p.onsite,
        hopping: p.hopping,
        b_field: 0.0,
    };
    if p.write_sites {
        let ham = billiard_hamiltonian(&base)?;
        match sink.format() {
            Format::Csv => {
                let mut buf = Vec::new();
                ham.write_sites_csv(&mut buf)?;
                sink.raw_with_header("sites.csv", &buf)?;
            }
            Format::Json => {
                let rows: Vec<Vec<Cell>> = ham
                    .sites
                    .iter()
                    .enumerate()
                    .map(|(i, &(x, y))| vec![i.into(), (x as usize).into(), (y as usize).into()])
                    .collect();
                sink.table("sites", &["site_index", "x", "y"], &rows)?;
            }
        }
    }
    // Dense billiard matrices are large, so field values run one at a time.
    for &b in &p.b_field {
        let spec = BilliardSpec { b_field: b, ..base };
        let ham = billiard_hamiltonian(&spec)?;
        let n = ham.dim();
        let mut checks = Map::new();
        let sfx = suffix("B", b, p.b_field.len());
        let (eigenvalues, out) = if b == 0.0 {
            let h = ham.to_dense_real();
            let mut asym = 0.0f64;
            for j in 0..n {
                for i in 0..j {
                    asym = asym.max((h[(i, j)] - h[(j, i)]).abs());
                }
            }
            let imag = ham.entries.iter().fold(0.0f64, |m, e| m.max(e.2.im.abs()));
            checks.insert("real_symmetric".into(), json!(asym == 0.0 && imag == 0.0));
            checks.insert("hermiticity_error".into(), json!(asym));
            if p.eigenvectors {
                let (w, v) = eigh_real(h.as_ref())?;
                drop(h);
                let out = analyse_member(w, n, opts, |j| real_weights((0..n).map(|i| v[(i, j)])))?;
                (out.summary.eigenvalues.clone(), Some(out))
            } else {
                (eigvalsh_real(h.as_ref())?, None)
            }
        } else {
            let h = ham.to_dense();
            let herm = hermiticity_error(h.as_ref());
            checks.insert("real_symmetric".into(), json!(false));
            checks.insert("hermiticity_error".into(), json!(herm));
            let sys = eigh(h.as_ref())?;
            drop(h);
            let out = p.eigenvectors.then(|| analyse_system(&sys, opts)).transpose()?;
            (sys.eigenvalues, out)
        };
        let band = 4.0 * p.hopping.abs();
        let dos = dos_histogram(&eigenvalues, p.onsite - band, p.onsite + band, p.dos_bin_width)?;
        let rows: Vec<Vec<Cell>> = dos
            .iter()
            .map(|r| vec![r.energy.into(), r.rho_emp.into(), r.rho_theory.into()])
            .collect();
        sink.table(&format!("dos{sfx}"), &["E", "rho_emp", "rho_theory"], &rows)?;
        let Some(out) = out else {
            sink.json(
                &format!("summary{sfx}"),
                json!({ "parameter": { "name": "B", "value": b }, "n_dim": n, "checks": checks }),
            )?;
            continue;
        };
        let mut combined = Combined::default();
        combined.push(out);
        let info = RunInfo {
            suffix: &sfx,
            eps_true: None,
            parameter: Some(("B", b)),
            checks,
        };
        write_outputs(sink, &combined, opts, info)?;
    }
    Ok(())
}

pub fn spinchain(p: &SpinChainParams, seed: u64, sink: &Sink) -> CliResult<()> {
    require_grid("k_list", &p.k_list)?;
    if p.realizations == 0 {
        return Err(CliError::Config("realizations must be positive".into()));
    }
    let opts = &p.analysis;
    let specs: Vec<SpinChainSpec> = p
        .k_list
        .iter()
        .map(|&k| SpinChainSpec {
            length: p.length,
            j_coupling: p.j_coupling,
            h_strength: p.h_strength,
            k_chirality: k,
            sz_sector: p.sz_sector,
            seed,
        })
        .collect();
    if p.write_basis {
        let basis = spin_basis(&specs[0])?;
        let rows: Vec<Vec<Cell>> = basis
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                // site 0 first, 1 = up
                let bits: String = (0..p.length).map(|j| if s >> j & 1 == 1 { '1' } else { '0' }).collect();
                vec![i.into(), Cell::Text(bits)]
            })
            .collect();
        sink.table("basis", &["state_index", "bitstring"], &rows)?;
    }
    let per_k = p.realizations;
    let mut runs: Vec<(Combined, f64)> = (0..specs.len()).map(|_| (Combined::default(), 0.0)).collect();
    let mut task = 0usize;
    for_members(
        specs.len() * per_k,
        |t| {
            let (spec, r) = (&specs[t / per_k], t % per_k);
            let h = spin_chain_block(spec, r)?;
            let herm = hermiticity_error(h.as_ref());
            let sys = eigh(h.as_ref())?;
            Ok((herm, analyse_system(&sys, opts)?))
        },
        |(herm, out): (f64, MemberOut)| {
            let run = &mut runs[task / per_k];
            run.0.push(out);
            run.1 = run.1.max(herm);
            task += 1;
            Ok(())
        },
    )?;
    for (spec, (combined, herm)) in specs.iter().zip(&runs) {
        let mut checks = Map::new();
        checks.insert("hermiticity_error".into(), json!(herm));
        let sfx = suffix("K", spec.k_chirality, specs.len());
        let info = RunInfo {
            suffix: &sfx,
            eps_true: None,
            parameter: Some(("K", spec.k_chirality)),
            checks,
        };
        write_outputs(sink, combined, opts, info)?;
    }
    Ok(())
}

pub fn fit(p: &FitParams, sink: &Sink) -> CliResult<()> {
    let mut acc = FitAccumulator::new();
    let source = match (&p.input, &p.cache) {
        (Some(path), None) => {
            for x in read_samples(path, p.kind)? {
                acc.add_x(x)?;
            }
            path.display().to_string()
        }
        (None, Some(path)) => {
            for sys in read_cache(path)? {
                let sys = sys?;
                for j in 0..sys.dim() {
                    acc.add_vector(sys.eigenvector(j))?;
                }
            }
            path.display().to_string()
        }
        _ => return Err(CliError::Config("fit needs exactly one of --input or --cache".into())),
    };
    let fit = fit_epsilon_accumulated(&acc, p.bracket)?;
    println!("eps_hat = {}", fit.eps_hat);
    sink.json(
        "fit",
        json!({
            "source": source,
            "eps_hat": fit.eps_hat,
            "nll": fit.neg_log_likelihood,
            "n_samples": fit.n_samples,
            "converged": fit.converged,
            "boundary_hit": fit.boundary_hit,
            "bracket": [fit.bracket.0, fit.bracket.1],
            "evaluations": fit.evaluations,
            "zero_samples": acc.zeros,
            "clamped_samples": acc.clamped,
        }),
    )?;
    Ok(())
}

fn read_samples(path: &Path, kind: SampleKind) -> CliResult<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut out = Vec::new();
    for (line_no, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split([',', ' ', '\t']).next().unwrap_or("");
        let v: f64 = match field.parse() {
            Ok(v) => v,
            // a column header
            Err(_) if out.is_empty() => continue,
            Err(e) => {
                return Err(CliError::Config(format!(
                    "{}:{}: `{field}`: {e}",
                    path.display(),
                    line_no + 1
                )));
            }
        };
        out.push(match kind {
            SampleKind::X => v,
            SampleKind::Y => v.exp(),
        });
    }
    Ok(out)
}
