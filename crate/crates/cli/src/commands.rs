use std::io::Write;

use num_traits::ToPrimitive;
use rtorsion::char_variety::{classify_components, Catalog, Component, Extremes};
use rtorsion::model_complexes::{
    circle_complex, circle_limit_exact, circle_log_torsion_sequence, convergence_constant, torus_complex, CircleRep,
    TorusRep,
};
use rtorsion::seifert::{seifert_limit_exact, seifert_log_torsion_sequence, SeifertIndex, SeifertRep};
use rtorsion::sl2_rep::ConjClassDescriptor;
use rtorsion::surgery_brieskorn::{
    brieskorn_higher_log_torsion_sequence, brieskorn_leading_limit_exact, brieskorn_max_limit_exact, brieskorn_torsion,
    filling_circle_rep, johnson_classify, torusknot_higher_log_torsion_sequence, torusknot_limit_exact, JohnsonTriple,
    TorusKnotExterior,
};
use rtorsion::torsion_core::torsion;
use rtorsion::verify::{self, VerifyOptions, VerifyReport};
use rtorsion::{Error, Log2Multiple};
use serde::Serialize;

use crate::table::{Cell, Table};
use crate::{
    BrieskornArgs, CharvarArgs, Cli, Command, ConvergenceArgs, Failure, Format, LimitsArgs, Target, TorsionArgs,
    VerifyArgs,
};

/// Absolute slack on the a priori convergence bound, for rounding.
const BOUND_SLACK: f64 = 1e-12;

pub fn run(cli: &Cli) -> Result<(), Failure> {
    let default = match cli.command {
        Command::Limits(_) | Command::Charvar(_) | Command::Verify(_) => Format::Json,
        _ => Format::Csv,
    };
    let format = cli.format.unwrap_or(default);
    let mut outcome = Ok(());
    let text = match &cli.command {
        Command::Torsion(args) => render(&torsion_table(args)?, format),
        Command::Limits(args) => render(&limits_table(args)?, format),
        Command::Convergence(args) => {
            let (table, violations) = convergence_table(args)?;
            if violations > 0 {
                outcome = Err(Failure::Verification(format!("{violations} values of N exceed the error bound")));
            }
            render(&table, format)
        }
        Command::Brieskorn(args) => render(&brieskorn_table(args)?, format),
        Command::Charvar(args) => charvar_output(args, format)?,
        Command::Verify(args) => {
            let report = run_verify(args)?;
            if !report.all_passed() {
                outcome = Err(Failure::Verification(format!("failed checks: {}", report.failures().join(", "))));
            }
            verify_output(&report, format)
        }
    };
    emit(cli, &text)?;
    outcome
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable") + "\n"
}

fn parse_ints(field: &str, s: &str) -> Result<Vec<i64>, Error> {
    s.split(',')
        .map(|t| {
            t.trim().parse::<i64>().map_err(|_| Error::parse(field, format!("expected an integer, got {:?}", t.trim())))
        })
        .collect()
}

fn parse_fixed<const K: usize>(field: &str, s: &str) -> Result<[i64; K], Error> {
    let v = parse_ints(field, s)?;
    v.try_into().map_err(|v: Vec<i64>| Error::parse(field, format!("expected {K} integers, got {}", v.len())))
}

fn read_seifert(field: &str, s: &str) -> Result<SeifertIndex, Failure> {
    let text = match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)?,
        None => s.to_string(),
    };
    SeifertIndex::parse_any(&text).map_err(|e| match e {
        Error::Parse { field: inner, message } if inner != field => {
            Error::parse(&format!("{field}.{inner}"), message).into()
        }
        other => other.into(),
    })
}

fn rational_cell<T: ToPrimitive + std::fmt::Display>(x: &T) -> Cell {
    x.to_i64().map(Cell::Int).unwrap_or_else(|| Cell::Text(x.to_string()))
}

fn limit_cells(limit: &Log2Multiple) -> Vec<Cell> {
    vec![limit.to_string().into(), rational_cell(limit.numer()), rational_cell(limit.denom()), limit.to_f64().into()]
}

/// A space with a representation for which closed forms are available.
enum Model {
    Seifert { index: SeifertIndex, rep: SeifertRep },
    Circle(CircleRep),
    TorusKnot { p: i64, q: i64, a: i64, b: i64 },
    Brieskorn { tk: TorusKnotExterior, triple: JohnsonTriple },
}

impl Model {
    fn resolve(t: &Target) -> Result<Self, Failure> {
        let chosen = [t.seifert.is_some(), t.circle.is_some(), t.torus_knot.is_some(), t.brieskorn.is_some()];
        match chosen.iter().filter(|&&c| c).count() {
            0 => {
                return Err(
                    Error::parse("target", "one of --seifert, --circle, --torus-knot, --brieskorn is required").into()
                )
            }
            1 => {}
            _ => {
                return Err(Error::parse(
                    "target",
                    "give exactly one of --seifert, --circle, --torus-knot, --brieskorn",
                )
                .into())
            }
        }
        if let Some(s) = &t.seifert {
            let index = read_seifert("seifert", s)?;
            let rep = match (&t.xi, &t.eta) {
                (Some(xi), None) => SeifertRep::from_xi(&index, &parse_ints("xi", xi)?)?,
                (None, Some(eta)) => SeifertRep::new(&index, &parse_ints("eta", eta)?)?,
                _ => return Err(Error::parse("xi", "give exactly one of --xi, --eta with --seifert").into()),
            };
            return Ok(Model::Seifert { index, rep });
        }
        if let Some(c) = &t.circle {
            let (eta, lambda) = c
                .split_once('/')
                .ok_or_else(|| Error::parse("circle", format!("expected \"eta/lambda\", got {c:?}")))?;
            let eta = eta.trim().parse().map_err(|_| Error::parse("circle", format!("bad eta {eta:?}")))?;
            let lambda = lambda.trim().parse().map_err(|_| Error::parse("circle", format!("bad lambda {lambda:?}")))?;
            return Ok(Model::Circle(CircleRep::new(eta, lambda)?));
        }
        if let Some(pq) = &t.torus_knot {
            let [p, q] = parse_fixed("torus-knot", pq)?;
            let ab = t.ab.as_deref().ok_or_else(|| Error::parse("ab", "--ab is required with --torus-knot"))?;
            let [a, b] = parse_fixed("ab", ab)?;
            // Validates p, q and the parity of a, b.
            torusknot_limit_exact(p, q, a, b)?;
            return Ok(Model::TorusKnot { p, q, a, b });
        }
        let pqn = t.brieskorn.as_deref().expect("one target is set");
        let [p, q, n] = parse_fixed("brieskorn", pqn)?;
        let tk = TorusKnotExterior::new(p, q, n)?;
        let abc = t.triple.as_deref().ok_or_else(|| Error::parse("triple", "--triple is required with --brieskorn"))?;
        let [a, b, c] = parse_fixed("triple", abc)?;
        let triple = JohnsonTriple::new(&tk, a, b, c)?;
        filling_circle_rep(&tk, &triple)?;
        Ok(Model::Brieskorn { tk, triple })
    }

    /// `log|Tor(ρ_{2N})|` for `N = 1, …, n_max`.
    fn sequence(&self, n_max: u64) -> Result<Vec<f64>, Error> {
        match self {
            Model::Seifert { index, rep } => seifert_log_torsion_sequence(index, rep, n_max),
            Model::Circle(rep) => Ok(circle_log_torsion_sequence(rep, n_max)),
            Model::TorusKnot { p, q, a, b } => torusknot_higher_log_torsion_sequence(*p, *q, *a, *b, n_max),
            Model::Brieskorn { tk, triple } => brieskorn_higher_log_torsion_sequence(tk, triple, n_max),
        }
    }

    /// Limit of `log|Tor|/(2N)`.
    fn limit(&self) -> Result<Log2Multiple, Error> {
        match self {
            Model::Seifert { index, rep } => seifert_limit_exact(index, rep.lambdas()),
            Model::Circle(rep) => Ok(circle_limit_exact(rep.lambda() as u64)),
            Model::TorusKnot { p, q, a, b } => torusknot_limit_exact(*p, *q, *a, *b),
            Model::Brieskorn { tk, triple } => brieskorn_leading_limit_exact(tk, triple),
        }
    }

    /// `C` with `|log|Tor|/(2N) − limit| ≤ C/N`.
    fn bound_constant(&self) -> Result<f64, Error> {
        let circles = match self {
            Model::Seifert { index, rep } => return rep.convergence_constant(index),
            Model::Circle(rep) => vec![*rep],
            Model::TorusKnot { p, q, a, b } => vec![CircleRep::from_angle(*a, *p)?, CircleRep::from_angle(*b, *q)?],
            Model::Brieskorn { tk, triple } => vec![
                CircleRep::from_angle(triple.a, tk.p())?,
                CircleRep::from_angle(triple.b, tk.q())?,
                filling_circle_rep(tk, triple)?,
            ],
        };
        Ok(circles.iter().map(convergence_constant).sum())
    }
}

fn n_range(args: &TorsionArgs) -> Result<(u64, u64), Error> {
    let (lo, hi) = match args.n {
        Some(n) => (n, n),
        None => (args.n_min, args.n_max),
    };
    if lo == 0 {
        return Err(Error::parse(if args.n.is_some() { "N" } else { "N-min" }, "N must be at least 1"));
    }
    if lo > hi {
        return Err(Error::parse("N-max", format!("N-max = {hi} is below N-min = {lo}")));
    }
    Ok((lo, hi))
}

fn generic_log_torsion(
    complex: Result<rtorsion::torsion_core::BasedChainComplex, Error>,
    n: u64,
) -> Result<f64, Error> {
    torsion(&complex?).value().ok_or_else(|| Error::NotAcyclic(format!("at N = {n}")))
}

fn torsion_table(args: &TorsionArgs) -> Result<Table, Failure> {
    let (lo, hi) = n_range(args)?;
    let mut table = Table::new(&["N", "log_torsion"]);
    if let Some(orders) = &args.torus {
        if args.target.seifert.is_some() || args.target.circle.is_some() {
            return Err(Error::parse("torus", "--torus cannot be combined with another target").into());
        }
        let [q, h] = parse_fixed("torus", orders)?;
        let order = |field: &str, x: i64| -> Result<ConjClassDescriptor, Error> {
            let x = u64::try_from(x).map_err(|_| Error::parse(field, "orders must be positive"))?;
            ConjClassDescriptor::of_order(x)
        };
        let rep = TorusRep::new(order("torus", q)?, order("torus", h)?)?;
        for n in lo..=hi {
            let value =
                generic_log_torsion(rep.sym_powers(2 * n as usize).and_then(|(q, h)| torus_complex(&q, &h)), n)?;
            table.push(vec![n.into(), value.into()]);
        }
        return Ok(table);
    }
    let model = Model::resolve(&args.target)?;
    if args.oracle {
        let Model::Circle(rep) = &model else {
            return Err(Error::parse("oracle", "--oracle applies to --circle only").into());
        };
        for n in lo..=hi {
            let value = generic_log_torsion(rep.sym_power(2 * n as usize).map(|l| circle_complex(&l)), n)?;
            table.push(vec![n.into(), value.into()]);
        }
        return Ok(table);
    }
    let seq = model.sequence(hi)?;
    for n in lo..=hi {
        table.push(vec![n.into(), seq[(n - 1) as usize].into()]);
    }
    Ok(table)
}

fn limits_table(args: &LimitsArgs) -> Result<Table, Failure> {
    let limit = match &args.lambdas {
        Some(lambdas) => {
            let Some(s) = &args.target.seifert else {
                return Err(Error::parse("lambdas", "--lambdas requires --seifert").into());
            };
            let index = read_seifert("seifert", s)?;
            let lambdas = parse_ints("lambdas", lambdas)?
                .into_iter()
                .map(|l| u64::try_from(l).map_err(|_| Error::parse("lambdas", "λ must be positive")))
                .collect::<Result<Vec<_>, _>>()?;
            seifert_limit_exact(&index, &lambdas)?
        }
        None => Model::resolve(&args.target)?.limit()?,
    };
    let mut table = Table::new(&["limit", "num", "den", "value", "limit_sq"]);
    let mut row = limit_cells(&limit);
    row.push(0.0f64.into());
    table.push(row);
    Ok(table)
}

fn convergence_table(args: &ConvergenceArgs) -> Result<(Table, usize), Failure> {
    if args.n_max == 0 {
        return Err(Error::parse("N-max", "N must be at least 1").into());
    }
    if args.stride == 0 {
        return Err(Error::parse("stride", "stride must be at least 1").into());
    }
    let model = Model::resolve(&args.target)?;
    let limit = model.limit()?.to_f64();
    let constant = model.bound_constant()?;
    let seq = model.sequence(args.n_max)?;
    let mut table = Table::new(&["N", "normalized", "limit", "error", "bound", "normalized_sq"]);
    let mut violations = 0;
    for (i, &value) in seq.iter().enumerate() {
        let n = (i + 1) as u64;
        let two_n = 2.0 * n as f64;
        let normalized = value / two_n;
        let error = (normalized - limit).abs();
        let bound = constant / n as f64;
        if error > bound + BOUND_SLACK {
            violations += 1;
        }
        if n.is_multiple_of(args.stride) || n == args.n_max {
            table.push(vec![
                n.into(),
                normalized.into(),
                limit.into(),
                error.into(),
                bound.into(),
                (value / (two_n * two_n)).into(),
            ]);
        }
    }
    Ok((table, violations))
}

fn brieskorn_table(args: &BrieskornArgs) -> Result<Table, Failure> {
    let tk = TorusKnotExterior::new(args.p, args.q, args.n)?;
    let triples = johnson_classify(&tk);
    if !args.list {
        let mut table =
            Table::new(&["p", "q", "n", "r", "triples", "acyclic", "max_limit", "max_num", "max_den", "max_value"]);
        let mut row: Vec<Cell> = vec![
            tk.p().into(),
            tk.q().into(),
            tk.n().into(),
            tk.r().into(),
            (triples.len() as u64).into(),
            (triples.iter().filter(|t| t.acyclic).count() as u64).into(),
        ];
        row.extend(limit_cells(&brieskorn_max_limit_exact(&tk)));
        table.push(row);
        return Ok(table);
    }
    let mut table = Table::new(&[
        "a",
        "b",
        "c",
        "acyclic",
        "torsion",
        "log_torsion",
        "limit",
        "limit_num",
        "limit_den",
        "limit_value",
    ]);
    for tagged in triples.iter().filter(|t| args.all || t.acyclic) {
        let t = tagged.triple;
        let mut row: Vec<Cell> = vec![t.a.into(), t.b.into(), t.c.into(), tagged.acyclic.into()];
        if tagged.acyclic {
            let tor = brieskorn_torsion(&tk, &t)?;
            row.push(tor.into());
            row.push(tor.ln().into());
            row.extend(limit_cells(&brieskorn_leading_limit_exact(&tk, &t)?));
        } else {
            row.extend(std::iter::repeat_n(Cell::Empty, 6));
        }
        table.push(row);
    }
    Ok(table)
}

#[derive(Serialize)]
struct ExtremesReport<'a> {
    seifert: &'a SeifertIndex,
    #[serde(flatten)]
    extremes: &'a Extremes,
}

fn charvar_output(args: &CharvarArgs, format: Format) -> Result<String, Failure> {
    let index = read_seifert("seifert", &args.seifert)?;
    let catalog = Catalog::build(&index)?;
    if !args.extremes {
        return Ok(match format {
            Format::Json => catalog.to_json(),
            Format::Csv => catalog.to_csv(),
        });
    }
    let extremes = classify_components(&index, &catalog.components)?;
    Ok(match format {
        Format::Json => to_json(&ExtremesReport { seifert: &index, extremes: &extremes }),
        Format::Csv => {
            let mut table =
                Table::new(&["kind", "xi", "dim", "lambdas", "limit", "limit_num", "limit_den", "limit_value"]);
            let join = |v: &mut dyn Iterator<Item = String>| v.collect::<Vec<_>>().join(" ");
            let mut push = |kind: &str, c: &Component| {
                let mut row: Vec<Cell> = vec![
                    kind.into(),
                    join(&mut c.xi.values().iter().map(|x| x.to_string())).into(),
                    i64::from(c.dim).into(),
                    join(&mut c.lambdas.iter().map(|x| x.to_string())).into(),
                ];
                row.extend(limit_cells(&c.limit));
                table.push(row);
            };
            for c in &extremes.max_components {
                push("max", c);
            }
            for c in &extremes.min_components {
                push("min", c);
            }
            table.to_csv()
        }
    })
}

fn run_verify(args: &VerifyArgs) -> Result<VerifyReport, Failure> {
    let perturb = match &args.perturb {
        Some(arg) => {
            let (name, eps) = arg
                .split_once('=')
                .ok_or_else(|| Error::parse("perturb", format!("expected \"CHECK=EPSILON\", got {arg:?}")))?;
            let eps: f64 = eps.trim().parse().map_err(|_| Error::parse("perturb", format!("bad epsilon {eps:?}")))?;
            Some((name.trim().to_string(), eps))
        }
        None => None,
    };
    let opts = VerifyOptions { quick: args.quick, perturb };
    Ok(verify::run(&opts, args.check.as_deref())?)
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    all_passed: bool,
    #[serde(flatten)]
    report: &'a VerifyReport,
}

fn verify_output(report: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => to_json(&VerifyJson { all_passed: report.all_passed(), report }),
        Format::Csv => {
            let mut table = Table::new(&["check", "passed", "cases", "max_deviation", "detail"]);
            for c in &report.checks {
                table.push(vec![
                    c.name.as_str().into(),
                    c.passed.into(),
                    (c.cases as u64).into(),
                    c.max_deviation.into(),
                    c.detail.as_str().into(),
                ]);
            }
            table.to_csv()
        }
    }
}
