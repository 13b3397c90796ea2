use std::fs;
use std::path::{Path, PathBuf};

use breakup_core::dynamics::{default_time_grid, evolve, with_eta0};
use breakup_core::entanglement::{self, log_grid, RegimeThresholds};
use breakup_core::figures::{self, FigureId};
use breakup_core::oracle::{reference_params, run_suite, Suite};
use breakup_core::table::{Cell, Table};
use breakup_core::wavepackets::{linspace, RelProfile};
use breakup_core::{Error, SystemParams};
use serde::Serialize;
use serde_json::{json, Value};

use crate::{Cli, Command, EtaArgs, EvolveArgs, FigureArgs, OracleArgs, ProfileArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorKind {
    Config,
    Numeric,
    OracleFailure,
}

#[derive(Debug, Clone)]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
    pub detail: Value,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        CliError {
            kind: ErrorKind::Config,
            message: message.into(),
            detail: Value::Null,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Config => 2,
            ErrorKind::Numeric | ErrorKind::OracleFailure => 3,
        }
    }

    pub fn record(&self) -> Value {
        json!({
            "kind": self.kind,
            "exit_code": self.exit_code(),
            "message": self.message,
            "detail": self.detail,
        })
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let kind = match e {
            Error::Config { .. } | Error::UnknownFigure(_) => ErrorKind::Config,
            _ => ErrorKind::Numeric,
        };
        CliError {
            kind,
            message: e.to_string(),
            detail: Value::Null,
        }
    }
}

pub enum Outcome {
    Success,
    OracleFailed(CliError),
}

type CliResult<T> = Result<T, CliError>;

struct Run<'a> {
    cli: &'a Cli,
    params: SystemParams,
    config_text: Option<String>,
    outputs: Vec<Value>,
    extra: serde_json::Map<String, Value>,
}

pub fn run(cli: &Cli) -> CliResult<Outcome> {
    let (params, config_text) = load_params(cli.config.as_deref())?;
    fs::create_dir_all(&cli.out)
        .map_err(|e| CliError::config(format!("cannot create output directory {}: {e}", cli.out.display())))?;
    let mut r = Run {
        cli,
        params,
        config_text,
        outputs: Vec::new(),
        extra: serde_json::Map::new(),
    };
    let outcome = match &cli.command {
        Command::Widths(a) => r.widths(a).map(|_| Outcome::Success),
        Command::Profile(a) => r.profile(a).map(|_| Outcome::Success),
        Command::Entanglement(a) => r.entanglement(a).map(|_| Outcome::Success),
        Command::Evolve(a) => r.evolve(a).map(|_| Outcome::Success),
        Command::Oracle(a) => r.oracle(a),
        Command::Figure(a) => r.figure(a).map(|_| Outcome::Success),
    }?;
    r.write_manifest()?;
    Ok(outcome)
}

fn load_params(path: Option<&Path>) -> CliResult<(SystemParams, Option<String>)> {
    match path {
        None => Ok((reference_params(), None)),
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| CliError::config(format!("cannot read config {}: {e}", p.display())))?;
            let params = SystemParams::from_config_str(&text).map_err(|e| match e {
                Error::Config { .. } => CliError::from(e),
                // a well-formed file with inadmissible values is still a config error
                other => CliError::config(other.to_string()),
            })?;
            Ok((params, Some(text)))
        }
    }
}

/// `log:lo:hi:n`, `lin:lo:hi:n`, or a comma-separated list.
pub fn parse_grid(spec: &str) -> CliResult<Vec<f64>> {
    let bad = |why: &str| CliError::config(format!("grid `{spec}`: {why}"));
    let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let grid = match spec.split(':').collect::<Vec<_>>().as_slice() {
        [kind @ ("log" | "lin"), lo, hi, n] => {
            let lo = num(lo)?;
            let hi = num(hi)?;
            let n: usize = n.trim().parse().map_err(|_| bad("point count must be an integer"))?;
            if n < 2 || hi <= lo || hi.is_nan() || lo.is_nan() {
                return Err(bad("need lo < hi and at least 2 points"));
            }
            if *kind == "log" {
                log_grid(lo, hi, n).map_err(|e| bad(&e.to_string()))?
            } else {
                linspace(lo, hi, n)
            }
        }
        [list] => list.split(',').map(num).collect::<CliResult<Vec<_>>>()?,
        _ => return Err(bad("expected log:lo:hi:n, lin:lo:hi:n or a list")),
    };
    if grid.is_empty() || grid.iter().any(|x| !x.is_finite()) {
        return Err(bad("grid must be non-empty and finite"));
    }
    Ok(grid)
}

impl Run<'_> {
    fn masses(&self, ratio: Option<f64>) -> CliResult<(f64, f64)> {
        match ratio {
            Some(r) if r > 0.0 && r.is_finite() => Ok((r, 1.0)),
            Some(r) => Err(CliError::config(format!("--mass-ratio must be finite and > 0, got {r}"))),
            None => Ok((self.params.m1, self.params.m2)),
        }
    }

    fn write(&mut self, table: &Table) -> CliResult<()> {
        let file = format!("{}.{}", table.name, self.cli.format.extension());
        let body = match self.cli.format {
            crate::Format::Csv => table.to_csv(),
            crate::Format::Json => table.to_json(),
        };
        let path: PathBuf = self.cli.out.join(&file);
        fs::write(&path, body).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))?;
        self.outputs.push(json!({
            "file": file,
            "description": table.description,
            "columns": table.columns,
            "rows": table.rows.len(),
        }));
        Ok(())
    }

    fn eta_table(&mut self, name: &str, a: &EtaArgs, with_widths: bool) -> CliResult<()> {
        let (m1, m2) = self.masses(a.mass_ratio)?;
        let grid = parse_grid(&a.eta_grid)?;
        let th = RegimeThresholds {
            factor: a.regime_factor,
        };
        let columns: &[(&str, &str)] = if with_widths {
            &[
                ("eta", "1"),
                ("s_e", "dr_rel"),
                ("c_e", "dr_rel"),
                ("s_i", "dr_rel"),
                ("c_i", "dr_rel"),
                ("r_e", "1"),
                ("r_i", "1"),
                ("regime", ""),
            ]
        } else {
            &[
                ("eta", "1"),
                ("ln_eta", "1"),
                ("r", "1"),
                ("r_e", "1"),
                ("r_i", "1"),
                ("regime", ""),
            ]
        };
        let mut t = Table::new(name, format!("m1 = {m1:e}, m2 = {m2:e}"), columns);
        for eta in grid {
            let rep = entanglement::report_with(eta, m1, m2, th)?;
            let regime = Cell::Text(rep.regime.to_string());
            if with_widths {
                t.push(vec![
                    eta.into(),
                    rep.s_e.into(),
                    rep.c_e.into(),
                    rep.s_i.into(),
                    rep.c_i.into(),
                    rep.r_e.into(),
                    rep.r_i.into(),
                    regime,
                ]);
            } else {
                let r = entanglement::entanglement_r(eta, m1, m2)?;
                t.push(vec![
                    eta.into(),
                    eta.ln().into(),
                    r.into(),
                    rep.r_e.into(),
                    rep.r_i.into(),
                    regime,
                ]);
            }
        }
        self.extra.insert("masses".into(), json!({ "m1": m1, "m2": m2 }));
        self.extra
            .insert("eta_star".into(), json!(entanglement::eta_star(m1, m2)?));
        self.write(&t)
    }

    fn widths(&mut self, a: &EtaArgs) -> CliResult<()> {
        self.eta_table("widths", a, true)
    }

    fn entanglement(&mut self, a: &EtaArgs) -> CliResult<()> {
        self.eta_table("entanglement", a, false)
    }

    fn profile(&mut self, a: &ProfileArgs) -> CliResult<()> {
        if a.zeta.is_empty() {
            return Err(CliError::config("--zeta needs at least one value"));
        }
        let grid = parse_grid(&a.rho_grid)?;
        for &zeta in &a.zeta {
            let prof = RelProfile::sample(&grid, zeta)?;
            let mut t = Table::new(
                format!("profile_zeta_{zeta}"),
                format!("unit-area radial profile at zeta = {zeta}"),
                &[("rho", "(r_rel - v t) / dr_rel0"), ("zeta", "1"), ("density", "1")],
            );
            for (rho, d) in prof.rho_grid.iter().zip(&prof.density) {
                t.push(vec![(*rho).into(), zeta.into(), (*d).into()]);
            }
            self.write(&t)?;
        }
        Ok(())
    }

    fn evolve(&mut self, a: &EvolveArgs) -> CliResult<()> {
        if a.points < 2 {
            return Err(CliError::config("--points must be at least 2"));
        }
        let p = match a.eta0 {
            Some(e) => with_eta0(&self.params, e)?,
            None => self.params,
        };
        let d = p.derive()?;
        let grid = default_time_grid(&d, a.points)?;
        let tr = evolve(&p, &grid)?;
        let mut t = Table::new(
            "evolve",
            format!("eta0 = {:e}, eta* = {:e}, eta_inf = {:e}", d.eta0, d.eta_star, d.eta_inf),
            &[
                ("t", "a.u."),
                ("t_scaled", "t_spr_rel"),
                ("dr_cm", "bohr"),
                ("dr_rel", "bohr"),
                ("eta", "1"),
                ("r_e", "1"),
                ("r_i", "1"),
            ],
        );
        for i in 0..tr.len() {
            t.push(vec![
                tr.times[i].into(),
                (tr.times[i] / d.t_spr_rel).into(),
                tr.dr_cm[i].into(),
                tr.dr_rel[i].into(),
                tr.eta[i].into(),
                tr.r_e[i].into(),
                tr.r_i[i].into(),
            ]);
        }
        self.extra.insert("evolved_params".into(), json!(p));
        self.extra.insert("derived".into(), json!(d));
        self.write(&t)
    }

    fn oracle(&mut self, a: &OracleArgs) -> CliResult<Outcome> {
        let suite: Suite = a.suite.parse().map_err(|e: Error| CliError::config(e.to_string()))?;
        let mut report = run_suite(suite)?;
        if let Some(tol) = a.tolerance {
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(CliError::config(format!("--tolerance must be finite and > 0, got {tol}")));
            }
            for c in &mut report.cases {
                c.tolerance = tol;
                c.pass = c.deviation <= tol;
            }
        }
        let mut t = Table::new(
            "oracle",
            format!("suite {}", a.suite),
            &[
                ("id", ""),
                ("closed_form", ""),
                ("oracle", ""),
                ("deviation", "1"),
                ("tolerance", "1"),
                ("pass", ""),
            ],
        );
        for c in &report.cases {
            t.push(vec![
                Cell::Text(c.id.clone()),
                c.closed_form.into(),
                c.oracle.into(),
                c.deviation.into(),
                c.tolerance.into(),
                Cell::Text(if c.pass { "pass" } else { "fail" }.into()),
            ]);
        }
        self.write(&t)?;
        let failures: Vec<Value> = report
            .failures()
            .map(|c| json!({ "id": c.id, "deviation": c.deviation, "tolerance": c.tolerance }))
            .collect();
        self.extra.insert(
            "oracle".into(),
            json!({
                "suite": a.suite,
                "passed": report.passed(),
                "total": report.cases.len(),
                "failed": failures.len(),
                "failures": failures,
            }),
        );
        if report.passed() {
            Ok(Outcome::Success)
        } else {
            Ok(Outcome::OracleFailed(CliError {
                kind: ErrorKind::OracleFailure,
                message: format!("{} of {} oracle cases failed", failures.len(), report.cases.len()),
                detail: Value::Array(failures),
            }))
        }
    }

    fn figure(&mut self, a: &FigureArgs) -> CliResult<()> {
        let ids: Vec<FigureId> = if a.id == "all" {
            FigureId::ALL.to_vec()
        } else {
            a.id
                .split(',')
                .map(|s| s.trim().parse::<FigureId>())
                .collect::<Result<_, _>>()?
        };
        let mut written = Vec::new();
        for id in ids {
            for table in figures::fig_profiles(id)? {
                self.write(&table)?;
                written.push((format!("{}.{}", table.name, self.cli.format.extension()), table));
            }
        }
        let refs: Vec<(String, &Table)> = written.iter().map(|(f, t)| (f.clone(), t)).collect();
        let manifest = figures::manifest(&refs);
        let path = self.cli.out.join("figures_manifest.json");
        let mut body = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        body.push('\n');
        fs::write(&path, body).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
    }

    fn write_manifest(&self) -> CliResult<()> {
        let argv: Vec<String> = std::env::args().skip(1).collect();
        let mut doc = json!({
            "tool": env!("CARGO_PKG_NAME"),
            "version": env!("CARGO_PKG_VERSION"),
            "argv": argv,
            "format": self.cli.format.extension(),
            "config_file": self.cli.config.as_ref().map(|p| p.display().to_string()),
            "config_text": self.config_text,
            "params": self.params,
            "params_config": self.params.to_config_string(),
            "outputs": self.outputs,
        });
        if let Value::Object(m) = &mut doc {
            for (k, v) in &self.extra {
                m.insert(k.clone(), v.clone());
            }
        }
        let path = self.cli.out.join("run_manifest.json");
        let mut body = serde_json::to_string_pretty(&doc).expect("manifest serializes");
        body.push('\n');
        fs::write(&path, body).map_err(|e| CliError::config(format!("cannot write {}: {e}", path.display())))
    }
}
