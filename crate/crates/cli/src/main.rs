//! `hnmod`: batch front end for hnmod-core. Every command prints one JSON
//! report and exits with a status encoding the verdict.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use hnmod_core::curved::{build_ce, FiniteDgla, DEFAULT_WEIGHT};
use hnmod_core::graded::{hom_space, FilteredLambdaModule};
use hnmod_core::hochschild::HochschildDgla;
use hnmod_core::homalg::{
    e1_via_graded_ext, filtered_ext_dims, filtered_hom_complex, graded_ext_dims, spectral_sequence,
    truncation_stability, HomFlavor,
};
use hnmod_core::io::{self, DglaJson, ModuleJson, PresentationJson, SplitBundleJson, SCHEMA_VERSION};
use hnmod_core::sheaf::{
    gamma_window_filtered, gr_hilbert_polynomials, hilbert_polynomial, p1_split_hn, roundtrip_check,
    roundtrip_check_filtered, sheafify, sheafify_filtered, step2_identity_check, FilteredPresentation,
};
use hnmod_core::stability::{
    hn_filtration, hn_window_membership, is_semistable, module_slope, poly_order, SearchMode, SlopeWeights,
    StabilityVerdict,
};
use hnmod_core::{corpus, Error, FieldSpec};

#[derive(Parser, Debug)]
#[command(name = "hnmod", version, about = "Exact HN filtrations, Hochschild dglas and filtered Ext for window modules")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Field override: `Q` or `Fp:<p>`.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Window `p,q`.
    #[arg(long, global = true, value_parser = parse_pair)]
    window: Option<(i64, i64)>,
    /// The degree `p′` of the second truncation.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pprime: Option<i64>,
    #[arg(long, global = true, value_enum, default_value_t = Mode::Heuristic)]
    mode: Mode,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for multi-input commands.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Leave out the timing field, for byte-stable reports.
    #[arg(long, global = true)]
    no_timing: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum Mode {
    Exhaustive,
    Heuristic,
}

impl From<Mode> for SearchMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Exhaustive => SearchMode::Exhaustive,
            Mode::Heuristic => SearchMode::Heuristic,
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Route {
    Filtered,
    Graded,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    SplitBundle,
    SplitCorpus,
    GenuineModule,
    PerturbedModule,
    FilteredModule,
    GaugeOrbit,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// HN filtration of each module.
    Hn { inputs: Vec<PathBuf> },
    /// Semistability of each module, under HN weights unless `--weights` is given.
    Semistable {
        inputs: Vec<PathBuf>,
        #[arg(long, value_parser = parse_pair, allow_hyphen_values = true)]
        weights: Option<(i64, i64)>,
    },
    /// Whether each flagged module lies in the HN window locus (needs `--pprime`).
    HnMember { inputs: Vec<PathBuf> },
    /// Ext dims of `(M, N)`, `N = M` when omitted.
    Ext {
        m: PathBuf,
        n: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Route::Filtered)]
        route: Route,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        /// Also tabulate Ext over the windows `[p, q]` for these `q`.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        stability: Vec<i64>,
    },
    /// Spectral-sequence pages of the filtered Hom complex.
    SsPages {
        m: PathBuf,
        n: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        nmax: usize,
        #[arg(long, default_value_t = 4)]
        rmax: usize,
    },
    /// Maurer–Cartan residual of each module structure.
    McCheck { inputs: Vec<PathBuf> },
    /// `H⁰, H¹, H²` of the twisted (filtered) Hochschild dgla.
    Tangent { inputs: Vec<PathBuf> },
    /// `q² = 0` for the Chevalley–Eilenberg model of a dgla or module file.
    CeVerify {
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_WEIGHT)]
        weight: u32,
        /// Refuse dglas of larger total dimension.
        #[arg(long, default_value_t = 40)]
        max_dim: usize,
    },
    /// The window module of a presentation or split bundle (needs `--window`).
    Gamma {
        input: PathBuf,
        /// Also write the module file here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// The presentation of a module generated in its bottom degree.
    Sheafify {
        input: PathBuf,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// `Γ(𝒮(M))_{≥p′} ≅ M_{≥p′}` for each module (needs `--pprime`).
    Roundtrip { inputs: Vec<PathBuf> },
    /// Hilbert polynomials of a presentation and its flag pieces (needs `--window`).
    Hilbert { inputs: Vec<PathBuf> },
    /// Writes a seeded corpus into the `--out` directory.
    CorpusGen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long, default_value_t = 10)]
        count: usize,
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Sign agreement of slope and h⁰-ratio differences (needs `--window`).
    Step2Check { first: PathBuf, second: PathBuf },
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or_else(|| format!("expected `a,b`, got {s:?}"))?;
    let a = a.trim().parse().map_err(|_| format!("bad integer {a:?}"))?;
    let b = b.trim().parse().map_err(|_| format!("bad integer {b:?}"))?;
    Ok((a, b))
}

/// Outcome of one unit of work, ordered by exit-code priority.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok,
    False,
    Inconclusive,
    Precondition,
    Schema,
}

impl Status {
    fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::False => 1,
            Status::Schema => 2,
            Status::Precondition => 3,
            Status::Inconclusive => 4,
        }
    }

    fn reason(self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::False => "predicate_false",
            Status::Schema => "schema_error",
            Status::Precondition => "precondition_failed",
            Status::Inconclusive => "inconclusive",
        }
    }

    fn of_error(e: &Error) -> Status {
        match e {
            Error::Schema(_) | Error::Dimension(_) | Error::FieldMismatch(_) => Status::Schema,
            Error::Precondition(_) => Status::Precondition,
            Error::Inconclusive(_) => Status::Inconclusive,
        }
    }

    fn of_bool(b: bool) -> Status {
        if b {
            Status::Ok
        } else {
            Status::False
        }
    }
}

type Outcome = (Status, Value);

fn failure(e: Error) -> Outcome {
    let s = Status::of_error(&e);
    (s, json!({ "status": s.reason(), "error": e.to_string() }))
}

fn finish(r: hnmod_core::Result<Outcome>) -> Outcome {
    r.unwrap_or_else(failure)
}

fn with_status(s: Status, mut v: Value) -> Outcome {
    v["status"] = json!(s.reason());
    (s, v)
}

struct Ctx {
    field: Option<FieldSpec>,
    window: Option<(i64, i64)>,
    pprime: Option<i64>,
    mode: SearchMode,
    seed: u64,
}

impl Ctx {
    fn window(&self) -> hnmod_core::Result<(i64, i64)> {
        let (p, q) = self.window.ok_or_else(|| Error::Schema("this command needs --window p,q".into()))?;
        if p > q {
            return Err(Error::Precondition(format!("empty window [{p}, {q}]")));
        }
        Ok((p, q))
    }

    fn pprime(&self) -> hnmod_core::Result<i64> {
        self.pprime.ok_or_else(|| Error::Schema("this command needs --pprime".into()))
    }
}

fn read(path: &Path) -> hnmod_core::Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Schema(format!("cannot read {}: {e}", path.display())))
}

fn digest(path: &Path) -> Value {
    match fs::read(path) {
        Ok(bytes) => json!({ "path": path.display().to_string(), "sha256": hex::encode(Sha256::digest(&bytes)) }),
        Err(_) => json!({ "path": path.display().to_string(), "sha256": null }),
    }
}

fn load_module(path: &Path, ctx: &Ctx) -> hnmod_core::Result<FilteredLambdaModule> {
    let j: ModuleJson = io::parse_json(&read(path)?)?;
    io::module_from_json(&j, ctx.field)
}

/// A presentation file, or a split-bundle file read as its HN-flagged presentation.
fn load_presentation(path: &Path, ctx: &Ctx) -> hnmod_core::Result<FilteredPresentation> {
    let text = read(path)?;
    let v: Value = io::parse_json(&text)?;
    if v.get("blocks").is_some() {
        let s = io::split_from_json(&io::parse_json::<SplitBundleJson>(&text)?)?;
        p1_split_hn(&s, ctx.field.unwrap_or(FieldSpec::Rationals))
    } else {
        io::presentation_from_json(&io::parse_json::<PresentationJson>(&text)?, ctx.field)
    }
}

/// A dgla file, or a module file read as its Hochschild dgla.
fn load_dgla(path: &Path, ctx: &Ctx) -> hnmod_core::Result<FiniteDgla> {
    let text = read(path)?;
    let v: Value = io::parse_json(&text)?;
    if v.get("degrees").is_some() {
        io::dgla_from_json(&io::parse_json::<DglaJson>(&text)?, ctx.field)
    } else {
        let m = io::module_from_json(&io::parse_json::<ModuleJson>(&text)?, ctx.field)?;
        let (l, _) = HochschildDgla::for_module(m.module())?;
        Ok(FiniteDgla::from_hochschild(&l)?.0)
    }
}

fn rat(x: &impl ToString) -> Value {
    json!(x.to_string())
}

fn opt_rat<T: ToString>(x: &Option<T>) -> Value {
    x.as_ref().map_or(Value::Null, rat)
}

fn verdict_json(v: &StabilityVerdict) -> Value {
    match v {
        StabilityVerdict::Destabilized { witness, slope } => json!({
            "verdict": v.name(),
            "witness_dims": witness.iter().map(|s| s.dim()).collect::<Vec<_>>(),
            "witness_slope": rat(slope),
        }),
        StabilityVerdict::Inconclusive { searched } => json!({ "verdict": v.name(), "searched": searched }),
        _ => json!({ "verdict": v.name() }),
    }
}

fn cmd_hn(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let r = hn_filtration(m.module(), ctx.mode)?;
        Ok(with_status(
            Status::Ok,
            json!({
                "weights": [r.weights.theta_p, r.weights.theta_q],
                "slopes": r.slopes.iter().map(opt_rat).collect::<Vec<_>>(),
                "hn_type": r.hn_type,
                "mode": r.mode,
                "piece_verdicts": r.piece_verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
                "search_statistics": r.search,
                "flag": io::module_to_json(&r.flag),
            }),
        ))
    })())
}

fn cmd_semistable(path: &Path, weights: Option<(i64, i64)>, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let m = m.module();
        let w = weights.map_or_else(|| SlopeWeights::hn(m), |(a, b)| SlopeWeights::new(a, b));
        let (v, stats) = is_semistable(m, w, ctx.mode)?;
        let s = match v.is_semistable() {
            Some(b) => Status::of_bool(b),
            None => Status::Inconclusive,
        };
        let mut out = verdict_json(&v);
        out["weights"] = json!([w.theta_p, w.theta_q]);
        out["slope"] = opt_rat(&module_slope(m, w));
        out["mode"] = json!(ctx.mode);
        out["search_statistics"] = json!(stats);
        Ok(with_status(s, out))
    })())
}

fn cmd_hn_member(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let pp = ctx.pprime()?;
        let b = hn_window_membership(&m, pp, ctx.mode)?;
        Ok(with_status(
            Status::of_bool(b),
            json!({ "member": b, "sfg": m.is_strongly_finitely_generated(), "pprime": pp, "mode": ctx.mode }),
        ))
    })())
}

fn cmd_ext(m: &Path, n: Option<&Path>, route: Route, nmax: usize, stability: &[i64], ctx: &Ctx) -> Outcome {
    finish((|| {
        let mm = load_module(m, ctx)?;
        let nn = match n {
            Some(p) => load_module(p, ctx)?,
            None => mm.clone(),
        };
        let table = match route {
            Route::Filtered => filtered_ext_dims(&mm, &nn, nmax)?,
            Route::Graded => graded_ext_dims(mm.module(), nn.module(), nmax)?,
        };
        let mut out = json!({ "ext": table, "hom_dim": hom_space(&mm, &nn, route == Route::Filtered)?.len() });
        if !stability.is_empty() {
            let p = ctx.window.map_or(mm.module().p(), |w| w.0);
            out["stability"] = json!(truncation_stability(&mm, &nn, p, stability, nmax)?);
        }
        Ok(with_status(Status::Ok, out))
    })())
}

fn cmd_ss_pages(m: &Path, n: Option<&Path>, nmax: usize, rmax: usize, ctx: &Ctx) -> Outcome {
    finish((|| {
        let mm = load_module(m, ctx)?;
        let nn = match n {
            Some(p) => load_module(p, ctx)?,
            None => mm.clone(),
        };
        let c = filtered_hom_complex(&mm, &nn, HomFlavor::Filtered, nmax)?;
        let pages = spectral_sequence(&c, rmax);
        let e1 = e1_via_graded_ext(&mm, &nn, nmax)?;
        let e1_agrees = pages.iter().find(|pg| pg.r == 1).is_some_and(|pg| {
            e1.iter().enumerate().all(|(p, row)| row.iter().enumerate().all(|(k, &d)| pg.dim(p as i64, k as i64) == d))
        });
        Ok(with_status(
            Status::Ok,
            json!({
                "pages": pages,
                "e1_via_graded_ext": e1,
                "e1_agrees": e1_agrees,
                "cohomology": c.cohomology_dims().into_iter().take(nmax + 1).collect::<Vec<_>>(),
            }),
        ))
    })())
}

fn cmd_mc_check(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let (l, mu) = HochschildDgla::for_module(m.module())?;
        let res = l.mc_residual(&mu)?;
        let zero = res.is_zero();
        let nonzero = l.coordinates(&res)?.iter().filter(|x| !x.is_zero()).count();
        Ok(with_status(
            Status::of_bool(zero),
            json!({
                "residual_zero": zero,
                "residual_support": nonzero,
                "associative": m.module().is_associative(),
            }),
        ))
    })())
}

fn cmd_tangent(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let (l, mu) = HochschildDgla::for_filtered(&m)?;
        let h = l.twist(&mu)?.cohomology_dims(2);
        Ok(with_status(
            Status::Ok,
            json!({ "filtered": m.length() > 1, "h0": h[0], "tangent_h1": h[1], "obstruction_h2": h[2] }),
        ))
    })())
}

fn cmd_ce_verify(path: &Path, weight: u32, max_dim: usize, ctx: &Ctx) -> Outcome {
    finish((|| {
        let l = load_dgla(path, ctx)?;
        if l.dim() > max_dim {
            return Err(Error::Precondition(format!("dgla of dimension {} exceeds --max-dim {max_dim}", l.dim())));
        }
        let model = build_ce(&l, weight)?;
        let fails = model.q_squared_failures();
        Ok(with_status(
            Status::of_bool(fails.is_empty()),
            json!({
                "q_squared_zero": fails.is_empty(),
                "failing_generators": fails,
                "dim": l.dim(),
                "weight": weight,
                "axioms": l.check_axioms().all_hold(),
            }),
        ))
    })())
}

fn cmd_gamma(path: &Path, emit: Option<&Path>, ctx: &Ctx) -> Outcome {
    finish((|| {
        let fp = load_presentation(path, ctx)?;
        let (p, q) = ctx.window()?;
        let m = gamma_window_filtered(&fp, p, q)?;
        let j = io::module_to_json(&m);
        if let Some(e) = emit {
            write_file(e, &io::to_json_string(&j))?;
        }
        let flag: Vec<Vec<usize>> = m.steps().iter().map(|s| s.iter().map(|x| x.dim()).collect()).collect();
        Ok(with_status(Status::Ok, json!({ "dims": m.module().dims(), "flag_dims": flag, "module": j })))
    })())
}

fn cmd_sheafify(path: &Path, emit: Option<&Path>, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let fp = if m.length() > 1 {
            sheafify_filtered(&m)?
        } else {
            FilteredPresentation::trivial(sheafify(m.module())?)
        };
        let j = io::presentation_to_json(&fp);
        if let Some(e) = emit {
            write_file(e, &io::to_json_string(&j))?;
        }
        Ok(with_status(Status::Ok, json!({ "relations": fp.ambient.rels().len(), "presentation": j })))
    })())
}

fn cmd_roundtrip(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let m = load_module(path, ctx)?;
        let pp = ctx.pprime()?;
        let b = if m.length() > 1 { roundtrip_check_filtered(&m, pp)? } else { roundtrip_check(m.module(), pp)? };
        Ok(with_status(Status::of_bool(b), json!({ "roundtrip": b, "pprime": pp })))
    })())
}

fn cmd_hilbert(path: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let fp = load_presentation(path, ctx)?;
        let (from, to) = ctx.window()?;
        let total = hilbert_polynomial(&fp.ambient, from, to)?;
        let pieces = gr_hilbert_polynomials(&fp, from, to)?;
        let order = pieces
            .windows(2)
            .map(|w| poly_order(&w[0], &w[1]).map(|o| format!("{o:?}").to_lowercase()))
            .collect::<hnmod_core::Result<Vec<_>>>()?;
        Ok(with_status(
            Status::Ok,
            json!({
                "hilbert_polynomial": total.to_string(),
                "pieces": pieces.iter().map(ToString::to_string).collect::<Vec<_>>(),
                "consecutive_order": order,
            }),
        ))
    })())
}

fn cmd_step2(a: &Path, b: &Path, ctx: &Ctx) -> Outcome {
    finish((|| {
        let g1 = load_presentation(a, ctx)?;
        let g2 = load_presentation(b, ctx)?;
        let (p, q) = ctx.window()?;
        let r = step2_identity_check(&g1.ambient, &g2.ambient, p, q)?;
        Ok(with_status(Status::of_bool(r.holds()), json!(r)))
    })())
}

fn write_file(path: &Path, text: &str) -> hnmod_core::Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Schema(format!("cannot create {}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Schema(format!("cannot write {}: {e}", path.display())))
}

fn cmd_corpus(kind: Kind, count: usize, bound: i64, out: Option<&Path>, ctx: &Ctx) -> Outcome {
    finish((|| {
        let dir = out.ok_or_else(|| Error::Schema("corpus-gen needs --out <dir>".into()))?;
        let field = ctx.field.unwrap_or(FieldSpec::Rationals);
        let seed = ctx.seed;
        let mut files: Vec<(String, String, Value)> = Vec::new();
        let name = |k: usize, tag: &str| format!("{tag}-{k:03}.json");
        match kind {
            Kind::SplitBundle => {
                for (k, s) in corpus::split_bundle_specs(seed, bound, count).iter().enumerate() {
                    files.push((name(k, "split"), io::to_json_string(&io::split_to_json(s)), json!({ "blocks": s.blocks() })));
                }
            }
            Kind::SplitCorpus => {
                for (k, c) in corpus::split_corpus().iter().enumerate() {
                    let meta = json!({ "blocks": c.spec.blocks(), "p": c.p, "pprime": c.p_prime, "q": c.q });
                    files.push((name(k, "split"), io::to_json_string(&io::split_to_json(&c.spec)), meta));
                }
            }
            Kind::GenuineModule | Kind::PerturbedModule => {
                let ms = if kind == Kind::GenuineModule {
                    corpus::genuine_modules(field, seed, count)?
                } else {
                    corpus::perturbed_modules(field, seed, count)?
                };
                for (k, m) in ms.iter().enumerate() {
                    let meta = json!({ "dims": m.dims(), "associative": m.is_associative() });
                    files.push((name(k, "module"), io::to_json_string(&io::plain_module_to_json(m)), meta));
                }
            }
            Kind::FilteredModule => {
                for (k, f) in corpus::filtered_modules(field, seed, count)?.iter().enumerate() {
                    let meta = json!({ "dims": f.module().dims(), "steps": f.length() });
                    files.push((name(k, "filtered"), io::to_json_string(&io::module_to_json(f)), meta));
                }
            }
            Kind::GaugeOrbit => {
                for (k, (m, g, gm)) in corpus::gauge_orbit_pairs(field, seed, count)?.iter().enumerate() {
                    let tag = format!("orbit-{k:03}");
                    files.push((format!("{tag}-source.json"), io::to_json_string(&io::plain_module_to_json(m)), json!({})));
                    files.push((format!("{tag}-gauge.json"), io::to_json_string(&io::gauge_to_json(g, field)), json!({})));
                    files.push((format!("{tag}-target.json"), io::to_json_string(&io::plain_module_to_json(gm)), json!({})));
                }
            }
        }
        let mut listing = Vec::new();
        for (file, text, meta) in files {
            let path = dir.join(&file);
            write_file(&path, &text)?;
            listing.push(json!({ "file": file, "sha256": hex::encode(Sha256::digest(text.as_bytes())), "meta": meta }));
        }
        Ok(with_status(
            Status::Ok,
            json!({ "kind": kind.to_possible_value().expect("named").get_name(), "seed": seed, "field": field.to_string(), "files": listing }),
        ))
    })())
}

/// Runs `f` over the inputs on `jobs` threads, keeping input order.
fn per_input(inputs: &[PathBuf], jobs: usize, f: impl Fn(&Path) -> Outcome + Sync) -> Vec<Outcome> {
    if jobs <= 1 {
        return inputs.iter().map(|p| f(p)).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| inputs.par_iter().map(|p| f(p)).collect()),
        Err(_) => inputs.iter().map(|p| f(p)).collect(),
    }
}

fn command_echo(cli: &Cli) -> (String, Vec<PathBuf>) {
    match &cli.command {
        Command::Hn { inputs } => ("hn".into(), inputs.clone()),
        Command::Semistable { inputs, .. } => ("semistable".into(), inputs.clone()),
        Command::HnMember { inputs } => ("hn-member".into(), inputs.clone()),
        Command::Ext { m, n, .. } => ("ext".into(), std::iter::once(m.clone()).chain(n.clone()).collect()),
        Command::SsPages { m, n, .. } => ("ss-pages".into(), std::iter::once(m.clone()).chain(n.clone()).collect()),
        Command::McCheck { inputs } => ("mc-check".into(), inputs.clone()),
        Command::Tangent { inputs } => ("tangent".into(), inputs.clone()),
        Command::CeVerify { inputs, .. } => ("ce-verify".into(), inputs.clone()),
        Command::Gamma { input, .. } => ("gamma".into(), vec![input.clone()]),
        Command::Sheafify { input, .. } => ("sheafify".into(), vec![input.clone()]),
        Command::Roundtrip { inputs } => ("roundtrip".into(), inputs.clone()),
        Command::Hilbert { inputs } => ("hilbert".into(), inputs.clone()),
        Command::CorpusGen { .. } => ("corpus-gen".into(), vec![]),
        Command::Step2Check { first, second } => ("step2-check".into(), vec![first.clone(), second.clone()]),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let field = match cli.common.field.as_deref().map(str::parse::<FieldSpec>).transpose() {
        Ok(f) => f,
        Err(e) => {
            eprintln!("hnmod: {e}");
            return ExitCode::from(Status::Schema.code());
        }
    };
    let ctx = Ctx {
        field,
        window: cli.common.window,
        pprime: cli.common.pprime,
        mode: cli.common.mode.into(),
        seed: cli.common.seed,
    };
    let jobs = cli.common.jobs;
    let results: Vec<Outcome> = match &cli.command {
        Command::Hn { inputs } => per_input(inputs, jobs, |p| cmd_hn(p, &ctx)),
        Command::Semistable { inputs, weights } => per_input(inputs, jobs, |p| cmd_semistable(p, *weights, &ctx)),
        Command::HnMember { inputs } => per_input(inputs, jobs, |p| cmd_hn_member(p, &ctx)),
        Command::Ext { m, n, route, nmax, stability } => vec![cmd_ext(m, n.as_deref(), *route, *nmax, stability, &ctx)],
        Command::SsPages { m, n, nmax, rmax } => vec![cmd_ss_pages(m, n.as_deref(), *nmax, *rmax, &ctx)],
        Command::McCheck { inputs } => per_input(inputs, jobs, |p| cmd_mc_check(p, &ctx)),
        Command::Tangent { inputs } => per_input(inputs, jobs, |p| cmd_tangent(p, &ctx)),
        Command::CeVerify { inputs, weight, max_dim } => {
            per_input(inputs, jobs, |p| cmd_ce_verify(p, *weight, *max_dim, &ctx))
        }
        Command::Gamma { input, emit } => vec![cmd_gamma(input, emit.as_deref(), &ctx)],
        Command::Sheafify { input, emit } => vec![cmd_sheafify(input, emit.as_deref(), &ctx)],
        Command::Roundtrip { inputs } => per_input(inputs, jobs, |p| cmd_roundtrip(p, &ctx)),
        Command::Hilbert { inputs } => per_input(inputs, jobs, |p| cmd_hilbert(p, &ctx)),
        Command::CorpusGen { kind, count, bound } => vec![cmd_corpus(*kind, *count, *bound, cli.common.out.as_deref(), &ctx)],
        Command::Step2Check { first, second } => vec![cmd_step2(first, second, &ctx)],
    };
    let (name, inputs) = command_echo(&cli);
    let (results, status) = if results.is_empty() {
        (vec![failure(Error::Schema("no input files given".into()))], Status::Schema)
    } else {
        let worst = results.iter().map(|r| r.0).max().unwrap_or(Status::Ok);
        (results, worst)
    };
    let mut report = json!({
        "tool": "hnmod",
        "version": env!("CARGO_PKG_VERSION"),
        "schema_version": SCHEMA_VERSION,
        "command": {
            "name": name,
            "field": ctx.field.map(|f| f.to_string()),
            "window": ctx.window.map(|(p, q)| [p, q]),
            "pprime": ctx.pprime,
            "mode": ctx.mode,
            "seed": ctx.seed,
        },
        "inputs": inputs.iter().map(|p| digest(p)).collect::<Vec<_>>(),
        "status": status.reason(),
        "results": results.into_iter().map(|r| r.1).collect::<Vec<_>>(),
    });
    if !cli.common.no_timing {
        report["timing"] = json!({ "elapsed_ms": start.elapsed().as_millis() as u64 });
    }
    let text = serde_json::to_string_pretty(&report).expect("report serializes") + "\n";
    let is_corpus = matches!(cli.command, Command::CorpusGen { .. });
    match cli.common.out.as_deref().filter(|_| !is_corpus) {
        Some(path) => {
            if let Err(e) = write_file(path, &text) {
                eprintln!("hnmod: {e}");
                return ExitCode::from(Status::Schema.code());
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(status.code())
}
