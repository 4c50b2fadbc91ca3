use clap::{Args, Parser, Subcommand, ValueEnum};
use equiweight::complexes::homology;
use equiweight::corpus::{self, CorpusEntry};
use equiweight::groups::{default_resolution, group_cohomology};
use equiweight::lfunctor::{LComplex, WindowContract};
use equiweight::model::VarietyModel;
use equiweight::smithhat::{b_prime, b_prime_case_checks, b_prime_value, build_hat_c, hat_e1_check, hat_ss, hat_tot_euler, quotient_comparison, smith_exactness};
use equiweight::specseq::{hochschild_serre, CellReport, Indexing, SpectralSequence, Variant};
use equiweight::verify;
use equiweight::weights::{
    beta_g_odd, beta_report, equivariant_weight_ss, invariant_beta, invariant_betti_relation, row_ss, row_table, weight_ss, InvariantReport,
};
use equiweight::Error;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "equiweight", version, about = "Equivariant homology and weight spectral sequences of filtered G-complexes over GF(2)")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args, Clone, Copy)]
struct OutputArgs {
    /// Print JSON instead of a table.
    #[arg(long, global = true, conflicts_with = "csv")]
    json: bool,
    /// Print CSV instead of a table.
    #[arg(long, global = true)]
    csv: bool,
    /// Show internal (filtration, total degree) coordinates instead of the reindexed ones.
    #[arg(long, global = true)]
    raw_index: bool,
}

#[derive(Args, Clone)]
struct ModelArgs {
    /// Model file, or the name of an embedded corpus entry.
    model: PathBuf,
    /// Lowest reported column (default −(dim + 4)).
    #[arg(long, allow_hyphen_values = true)]
    p_min: Option<i64>,
    /// Extra columns beyond `p_min` (default dim + 3).
    #[arg(long)]
    r_max: Option<usize>,
}

#[derive(Args, Clone, Copy)]
struct Range {
    #[arg(long, allow_hyphen_values = true)]
    kmin: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    kmax: Option<i64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    I,
    Ii,
}

#[derive(Clone, Copy, ValueEnum)]
enum InvariantArg {
    Bkg,
    Qb,
    Beta,
    BetaOdd,
    InvariantBeta,
    BPrime,
}

#[derive(Subcommand)]
enum Cmd {
    /// Betti numbers of the underlying complex with generators.
    Homology(ModelArgs),
    /// `H^n(G, H_q(X))` for `0 ≤ n ≤ nmax`.
    GroupCohomology {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long, default_value_t = 4)]
        nmax: i64,
    },
    /// `dim H_k(X; G)`, listed from `kmax` down to `kmin`.
    EquivariantHomology {
        #[command(flatten)]
        m: ModelArgs,
        #[command(flatten)]
        range: Range,
    },
    /// Hochschild–Serre pages `E^r_{p,q} = H^{−p}(G, H_q)` from page 2.
    HochschildSerre {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long)]
        page: Option<usize>,
    },
    /// Weight spectral sequence of the underlying filtered complex.
    WeightSs {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long)]
        page: Option<usize>,
    },
    /// Equivariant weight spectral sequence.
    EquivariantWeightSs {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long)]
        page: Option<usize>,
    },
    /// `dim Ω_α H_k(X; G)`.
    OmegaFiltration {
        #[command(flatten)]
        m: ModelArgs,
        #[command(flatten)]
        range: Range,
    },
    /// Row sequence `q` of the equivariant page 2.
    RowSs {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, value_enum, default_value = "ii")]
        variant: VariantArg,
        #[arg(long, default_value_t = 2)]
        page: usize,
    },
    /// Additive invariants.
    Invariants {
        #[arg(value_enum)]
        which: InvariantArg,
        #[command(flatten)]
        m: ModelArgs,
        #[command(flatten)]
        range: Range,
        /// Row for `qb`.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        q: i64,
    },
    /// Smith exact sequence in every filtration degree (Z/2 with fixed cells).
    SmithCheck(ModelArgs),
    /// Invariant chains against the quotient companion (free actions).
    QuotientCheck(ModelArgs),
    /// The `^kĈ` double complex, its Euler characteristics and page-1 formula check.
    Hatc {
        #[command(flatten)]
        m: ModelArgs,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0)]
        k: i64,
    },
    /// Closed-form cases of `B'_k = β^G_k`.
    Thm411(ModelArgs),
    /// `dim H_q(X;G) = _Gβ_q + Σ_{i>q} β_i(X^G)` on compact nonsingular Z/2 models.
    Thm416 {
        #[command(flatten)]
        m: ModelArgs,
        #[command(flatten)]
        range: Range,
    },
    /// Evaluate every expected block of the corpus.
    VerifyCorpus {
        /// Directory of model files; the embedded corpus when absent.
        #[arg(long)]
        dir: Option<PathBuf>,
    },
}

/// Tabular output with a pass flag for the exit code.
struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Value>>,
    notes: Vec<String>,
    pass: bool,
}

impl Report {
    fn new(columns: &[&'static str]) -> Self {
        Report { columns: columns.to_vec(), rows: Vec::new(), notes: Vec::new(), pass: true }
    }

    fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    fn render(&self, out: OutputArgs) -> anyhow::Result<String> {
        let cell = |v: &Value| match v {
            Value::String(s) => s.clone(),
            Value::Null => String::new(),
            other => other.to_string(),
        };
        if out.json {
            let rows: Vec<Value> = self
                .rows
                .iter()
                .map(|r| Value::Object(self.columns.iter().zip(r).map(|(c, v)| (c.to_string(), v.clone())).collect()))
                .collect();
            let doc = json!({"rows": rows, "notes": self.notes, "pass": self.pass});
            return Ok(serde_json::to_string_pretty(&doc)? + "\n");
        }
        if out.csv {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&self.columns)?;
            for r in &self.rows {
                w.write_record(r.iter().map(cell))?;
            }
            return Ok(String::from_utf8(w.into_inner()?)?);
        }
        let text: Vec<Vec<String>> = self.rows.iter().map(|r| r.iter().map(cell).collect()).collect();
        let widths: Vec<usize> = (0..self.columns.len())
            .map(|i| text.iter().map(|r| r[i].chars().count()).chain([self.columns[i].len()]).max().unwrap_or(0))
            .collect();
        let mut buf = String::new();
        let mut line = |cells: Vec<&str>| {
            let parts: Vec<String> = cells.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
            writeln!(buf, "{}", parts.join("  ").trim_end()).unwrap();
        };
        line(self.columns.clone());
        for r in &text {
            line(r.iter().map(String::as_str).collect());
        }
        for n in &self.notes {
            writeln!(buf, "# {n}").unwrap();
        }
        Ok(buf)
    }
}

fn load(path: &Path) -> anyhow::Result<CorpusEntry> {
    if path.exists() {
        return Ok(corpus::load(path)?);
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    if corpus::CORPUS.iter().all(|(n, _)| *n != stem) {
        anyhow::bail!("{}: no such file or corpus entry", path.display());
    }
    Ok(corpus::corpus_entry(stem)?)
}

struct Ctx {
    model: VarietyModel,
    contract: WindowContract,
}

impl Ctx {
    fn new(m: &ModelArgs) -> anyhow::Result<Ctx> {
        let model = load(&m.model)?.model;
        let def = model.default_contract();
        let contract = WindowContract::new(m.p_min.unwrap_or(def.p_min), m.r_max.unwrap_or(def.r_max));
        Ok(Ctx { model, contract })
    }

    fn range(&self, r: Range) -> Vec<i64> {
        let lo = r.kmin.unwrap_or(self.contract.guaranteed_range().0);
        let hi = r.kmax.unwrap_or(self.model.dimension().max(0) + 1);
        (lo..=hi).rev().collect()
    }
}

fn page_rows(ss: &SpectralSequence, pages: &[Option<usize>], raw: bool, describe: &dyn Fn(i64, &equiweight::gf2::BitVec) -> String) -> Report {
    let mut rep = Report::new(&["page", "p", "q", "dim", "stable", "generators"]);
    for &r in pages {
        for c in ss.report(r, describe) {
            let CellReport { p, q, dim, stabilized, generators, .. } = c;
            let (p, q, page) = if raw {
                let (s, n) = ss.indexing.to_key(p, q);
                let (a, b) = Indexing::Raw.to_display(s, n);
                (a, b, r.map(|r| json!(r - ss.indexing.page_offset())))
            } else {
                (p, q, r.map(|r| json!(r)))
            };
            rep.push(vec![page.unwrap_or(json!("inf")), json!(p), json!(q), json!(dim), json!(stabilized), json!(generators.join(", "))]);
        }
    }
    rep
}

fn pages_for(ss: &SpectralSequence, page: Option<usize>, first: usize) -> Vec<Option<usize>> {
    match page {
        Some(r) => vec![Some(r)],
        None => {
            let last = ss.converged_at().unwrap_or(ss.r_max() + ss.indexing.page_offset()).max(first);
            (first..=last).map(Some).chain([None]).collect()
        }
    }
}

fn bound(x: i64) -> String {
    match x {
        i64::MIN => "-inf".into(),
        i64::MAX => "inf".into(),
        x => x.to_string(),
    }
}

fn invariant_row(r: &InvariantReport) -> Vec<Value> {
    vec![
        json!(r.index.iter().map(i64::to_string).collect::<Vec<_>>().join(",")),
        json!(r.value),
        json!(r.route),
        json!(format!("[{}, {}]", bound(r.certified_window.0), bound(r.certified_window.1))),
        json!(r.nash_faithful),
    ]
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let raw = cli.out.raw_index;
    Ok(match &cli.cmd {
        Cmd::Homology(m) => {
            let c = Ctx::new(m)?;
            let k = c.model.complex();
            let mut rep = Report::new(&["q", "dim", "generators"]);
            for q in k.chain.degrees().rev() {
                let h = homology(k, q);
                let gens: Vec<String> = h.classes.representatives().iter().map(|v| k.describe(q, v)).collect();
                rep.push(vec![json!(q), json!(h.dim()), json!(gens.join(", "))]);
            }
            rep
        }
        Cmd::GroupCohomology { m, nmax } => {
            let c = Ctx::new(m)?;
            let k = c.model.complex();
            let res = default_resolution(&k.group, (*nmax + 2) as usize)?;
            let mut rep = Report::new(&["n", "q", "dim"]);
            for q in k.chain.degrees().rev() {
                let h = homology(k, q);
                for n in 0..=*nmax {
                    rep.push(vec![json!(n), json!(q), json!(group_cohomology(&k.group, &h.module, n, &res)?.dim())]);
                }
            }
            rep
        }
        Cmd::EquivariantHomology { m, range } => {
            let c = Ctx::new(m)?;
            let l = LComplex::new(c.model.complex(), None, c.contract)?;
            let mut rep = Report::new(&["k", "dim"]);
            for k in c.range(*range) {
                rep.push(vec![json!(k), json!(l.homology_dim(k)?)]);
            }
            rep
        }
        Cmd::HochschildSerre { m, page } => {
            let c = Ctx::new(m)?;
            let l = LComplex::new(c.model.complex(), None, c.contract)?;
            let ss = hochschild_serre(&l, c.contract.r_max);
            page_rows(&ss, &pages_for(&ss, *page, 2), raw, &|n, v| l.describe(n, v))
        }
        Cmd::WeightSs { m, page } => {
            let c = Ctx::new(m)?;
            let fc = &c.model.fk.filtration;
            let ss = weight_ss(fc, equiweight::weights::default_r_max(fc));
            let k = c.model.complex();
            page_rows(&ss, &pages_for(&ss, *page, 1), raw, &|n, v| k.describe(n, v))
        }
        Cmd::EquivariantWeightSs { m, page } => {
            let c = Ctx::new(m)?;
            let eq = equivariant_weight_ss(&c.model.fk, None, c.contract, None)?;
            let l = eq.l();
            page_rows(&eq.ss, &pages_for(&eq.ss, *page, 2), raw, &|n, v| l.describe(n, v))
        }
        Cmd::OmegaFiltration { m, range } => {
            let c = Ctx::new(m)?;
            let eq = equivariant_weight_ss(&c.model.fk, None, c.contract, None)?;
            let mut rep = Report::new(&["k", "alpha", "dim"]);
            for k in c.range(*range) {
                for a in c.model.fk.alpha_min()..=c.model.fk.alpha_max() {
                    rep.push(vec![json!(k), json!(a), json!(eq.omega_dim(k, a)?)]);
                }
            }
            rep
        }
        Cmd::RowSs { m, q, variant, page } => {
            let c = Ctx::new(m)?;
            let v = match variant {
                VariantArg::I => Variant::I,
                VariantArg::Ii => Variant::II,
            };
            let row = row_ss(&c.model.fk, *q, v, None, c.contract)?;
            let l = &row.l;
            page_rows(&row.ss, &[Some(*page)], raw, &|n, x| l.describe(n, x))
        }
        Cmd::Invariants { which, m, range, q } => {
            let c = Ctx::new(m)?;
            let v = &c.model;
            let mut rep = Report::new(&["index", "value", "route", "certified_window", "nash_faithful"]);
            let ks = c.range(*range);
            match which {
                InvariantArg::Bkg | InvariantArg::Qb => {
                    let t = row_table(&v.fk, None, c.contract, v.flags.nash_faithful)?;
                    for k in ks {
                        let r = if matches!(which, InvariantArg::Bkg) { t.bkg(k)? } else { t.qb(*q, k)? };
                        rep.push(invariant_row(&r));
                    }
                }
                InvariantArg::Beta => ks.iter().for_each(|&k| rep.push(invariant_row(&beta_report(&v.fk.filtration, k)))),
                InvariantArg::BetaOdd => {
                    for k in ks {
                        rep.push(invariant_row(&beta_g_odd(&v.fk, k)?));
                    }
                }
                InvariantArg::InvariantBeta => {
                    for k in ks {
                        rep.push(invariant_row(&invariant_beta(v, k)?));
                    }
                }
                InvariantArg::BPrime => {
                    for k in ks {
                        rep.push(invariant_row(&b_prime(v, k)?));
                    }
                }
            }
            rep
        }
        Cmd::SmithCheck(m) => {
            let c = Ctx::new(m)?;
            let v = &c.model;
            let mut rep = Report::new(&["alpha", "degree", "fixed", "orbit", "middle", "right", "exact"]);
            for a in v.fk.alpha_min()..=v.fk.alpha_max() {
                let e = smith_exactness(v, a)?;
                rep.pass &= e.exact;
                for r in &e.ranks {
                    let ok = e.failing_degree != Some(r.degree);
                    rep.push(vec![json!(a), json!(r.degree), json!(r.fixed), json!(r.orbit), json!(r.middle), json!(r.right), json!(ok)]);
                }
            }
            rep
        }
        Cmd::QuotientCheck(m) => {
            let c = Ctx::new(m)?;
            let q = quotient_comparison(&c.model)?;
            let mut rep = Report::new(&["iso", "failing", "detail"]);
            rep.pass = q.iso;
            rep.push(vec![json!(q.iso), json!(q.failing.map(|(a, k)| format!("alpha {a}, degree {k}"))), json!(q.detail)]);
            rep
        }
        Cmd::Hatc { m, k } => {
            let c = Ctx::new(m)?;
            let hc = build_hat_c(*k, &c.model.fk, None)?;
            let mut rep = Report::new(&["alpha", "beta", "cohomological_degree", "dim"]);
            for (a, b) in hc.dc.cells() {
                rep.push(vec![json!(a), json!(b), json!(-k - a), json!(hc.dc.dim(a, b))]);
            }
            let chi = hc.euler_characteristic();
            let chi_i = hat_ss(&hc, Variant::I, 4).euler_characteristic(None);
            let chi_ii = hat_ss(&hc, Variant::II, 4).euler_characteristic(Some(1));
            let tot = hat_tot_euler(&hc);
            rep.notes.push(format!("chi(entries) = {chi}, chi(I, inf) = {chi_i}, chi(II, page 1) = {chi_ii}, chi(Tot) = {tot}"));
            rep.pass = chi == chi_i && chi == chi_ii && chi == tot;
            if c.model.is_z2() && c.model.fixed_model().is_ok() {
                let bad = hat_e1_check(&c.model, *k)?;
                rep.notes.push(format!("page-1 formula: {}", if bad.is_empty() { "holds".to_string() } else { format!("fails at {bad:?}") }));
                rep.pass &= bad.is_empty();
            }
            rep
        }
        Cmd::Thm411(m) => {
            let c = Ctx::new(m)?;
            let mut rep = Report::new(&["case", "k", "b_prime", "closed_form", "holds"]);
            for ch in b_prime_case_checks(&c.model)? {
                rep.pass &= ch.holds;
                rep.push(vec![json!(ch.case), json!(ch.k), json!(ch.lhs), json!(ch.rhs), json!(ch.holds)]);
            }
            rep
        }
        Cmd::Thm416 { m, range } => {
            let c = Ctx::new(m)?;
            let mut rep = Report::new(&["q", "equivariant_homology", "invariant_beta_plus_fixed", "equal", "invariant_beta", "b_prime_candidate"]);
            for q in c.range(*range) {
                let r = invariant_betti_relation(&c.model, q, c.contract)?;
                rep.pass &= r.equal;
                // B'_q minus the same fixed-point tail; compared against _Gβ_q, never asserted.
                let ib = invariant_beta(&c.model, q)?.value;
                let cand = b_prime_value(&c.model, q).ok().map(|b| b - (r.rhs - ib));
                rep.push(vec![json!(q), json!(r.lhs), json!(r.rhs), json!(r.equal), json!(ib), json!(cand)]);
            }
            rep.notes.push("b_prime_candidate is shown for comparison with invariant_beta only".into());
            rep
        }
        Cmd::VerifyCorpus { dir } => {
            let results = match dir {
                None => verify::verify_corpus(),
                Some(d) => {
                    let mut files: Vec<PathBuf> = std::fs::read_dir(d)?
                        .filter_map(|e| e.ok().map(|e| e.path()))
                        .filter(|p| p.extension().is_some_and(|x| x == "json"))
                        .collect();
                    files.sort();
                    let mut out = Vec::new();
                    for f in files {
                        let text = std::fs::read_to_string(&f)?;
                        let stem = f.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_string();
                        let meta: corpus::ModelFile = serde_json::from_str(&text).map_err(|e| anyhow::anyhow!("{}: {e}", f.display()))?;
                        out.extend(verify::verify_entry(&stem, &meta, &corpus::parse_str(&text)));
                    }
                    out
                }
            };
            let mut rep = Report::new(&["entry", "block", "tag", "kind", "result", "detail"]);
            for r in &results {
                rep.pass &= r.pass;
                let detail = if r.pass { String::new() } else { r.detail.clone() };
                rep.push(vec![json!(r.entry), json!(r.block), json!(r.tag), json!(r.kind), json!(if r.pass { "pass" } else { "FAIL" }), json!(detail)]);
            }
            let failed = results.iter().filter(|r| !r.pass).count();
            rep.notes.push(format!("{} blocks, {failed} failed", results.len()));
            rep
        }
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            let written = rep.render(cli.out).and_then(|text| Ok(std::io::stdout().lock().write_all(text.as_bytes())?));
            if let Err(e) = written {
                // A closed pipe (`| head`) is not a failure.
                let closed = e.downcast_ref::<std::io::Error>().is_some_and(|io| io.kind() == std::io::ErrorKind::BrokenPipe);
                if !closed {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if rep.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Some(Error::WindowTooSmall { suggested_p_min, .. }) = e.downcast_ref::<Error>() {
                eprintln!("hint: rerun with --p-min {suggested_p_min}");
            }
            ExitCode::from(2)
        }
    }
}
