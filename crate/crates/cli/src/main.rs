use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use apsieve_core::arith::QuadField;
use apsieve_core::curves::{
    self, by_name, catalog, catalog_fixture_records, delta::classes, delta_candidates, jinv_check, local_solubility,
    pivot_system, quadruple_keys, CurveFamily, GenusOneQuartic, Place,
};
use apsieve_core::oracle::{Chained, CurveOracle, FixtureStore, LiveOracle, Question};
use apsieve_core::pipeline::{run_pipeline_k5, verify_theorem1, PipelineOptions, Reduction};
use apsieve_core::search::{search_box, solution_json, verify_solution, BCondition, SearchSpec};
use apsieve_core::sieve::{self, auto_eliminate, replay, sieve_tuple, Certificate, SieveVerdict};
use apsieve_core::tuples::{
    coefficient_alphabet, find_subtuple, generate_candidates, generate_k5_candidates, half_subprogression, ATuple,
    TupleConstraints,
};
use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

const OK: u8 = 0;
const FAILED: u8 = 1;
const OPEN: u8 = 2;
const BAD_INPUT: u8 = 3;

#[derive(Parser)]
#[command(name = "apsieve", version, about = "Products of terms in arithmetic progression equal to b*y^2")]
struct Cli {
    /// Fixture file (JSON lines); the bundled fixtures are used otherwise
    #[arg(long, global = true, env = "APSIEVE_FIXTURES")]
    fixtures: Option<PathBuf>,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Squarefree coefficients with prime factors up to --pmax
    Alphabet {
        #[arg(long, default_value_t = 5)]
        pmax: u64,
    },
    /// Candidate coefficient tuples
    Tuples(TuplesArgs),
    /// Congruence sieve
    Sieve(SieveArgs),
    #[command(subcommand)]
    Curves(CurvesCmd),
    #[command(subcommand)]
    Oracle(OracleCmd),
    /// Exhaustive search of an (n, d) box
    Search(SearchArgs),
    /// Check a claimed solution, or the reductions for k >= 7
    Verify(VerifyArgs),
    /// Reduce a long tuple to a known shorter one
    Reduce {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tuple: Vec<i64>,
        /// Known tuples as a,b,c;d,e,f (default: the settled k = 7 tuples)
        #[arg(long, allow_hyphen_values = true)]
        known: Option<String>,
    },
    /// Full k = 5 pipeline
    Pipeline {
        #[arg(long, default_value_t = 5)]
        k: usize,
        /// Sieve primes after the rank-0 stage; empty to skip
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        primes: Option<Vec<u64>>,
        /// Height bound of the rank-0 point search
        #[arg(long, default_value_t = 10_000)]
        height: u64,
        /// Print a line for every tuple, not only the open ones and the summary
        #[arg(long)]
        all: bool,
    },
}

#[derive(Args)]
struct TuplesArgs {
    #[arg(long, default_value_t = 5)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    pmax: u64,
    /// INDEX:P, p must divide a_INDEX; repeatable
    #[arg(long)]
    force: Vec<String>,
    /// Union over the --force conditions instead of all at once
    #[arg(long)]
    any: bool,
    /// Allow more sign changes than one
    #[arg(long, default_value_t = 1)]
    sign_changes: usize,
}

#[derive(Args)]
struct SieveArgs {
    /// Tuples a,b,c,...; read from stdin (one per line) when absent
    #[arg(long, allow_hyphen_values = true)]
    tuple: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Replay certificates from a JSON-lines file
    #[arg(long)]
    replay: Option<PathBuf>,
    /// Print certificates of eliminated tuples only
    #[arg(long)]
    eliminated: bool,
}

#[derive(Args)]
struct FamilyArgs {
    /// Catalogued family name (see `curves derive --list`)
    #[arg(long)]
    family: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    tuple: Option<Vec<i64>>,
    #[arg(long, value_delimiter = ',')]
    pivots: Option<Vec<usize>>,
    #[arg(long, default_value_t = 1)]
    scale: i64,
    /// D of Q(sqrt D)
    #[arg(long, default_value_t = -1, allow_hyphen_values = true)]
    field: i64,
    #[arg(long, value_delimiter = ',')]
    linear: Option<Vec<usize>>,
    #[arg(long)]
    quad: Option<usize>,
}

#[derive(Subcommand)]
enum CurvesCmd {
    /// Relations, factors and twists of a family
    Derive {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long)]
        list: bool,
    },
    /// Twist candidates and their classes
    Delta {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Compare tabulated Weierstrass models with the derived Jacobians
    JinvCheck,
    /// Local solubility of a quartic given by key
    Local {
        #[arg(long)]
        key: String,
        /// Primes or "inf"
        #[arg(long, value_delimiter = ',')]
        places: Vec<String>,
    },
    /// Relations alpha x_i^2 + beta x_j^2 = gamma x_m^2 for pivots i, j
    System {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tuple: Vec<i64>,
        #[arg(long, value_delimiter = ',')]
        pivots: Vec<usize>,
    },
}

#[derive(Subcommand)]
enum OracleCmd {
    /// Load and validate a fixture file
    Check,
    /// Canonical keys: of a family's twists, of the rank-0 quadruples, or of a quartic
    Key {
        #[command(flatten)]
        fam: FamilyArgs,
        /// Quadruple keys of the k = 5 tuples surviving the mod-5 sieve
        #[arg(long)]
        rank0: bool,
        /// Coefficients c4,c3,c2,c1,c0 of a quartic over Q
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        quartic: Option<Vec<i64>>,
    },
    /// Point-set records derived from the catalogued data
    Catalog,
    /// Ask a question: fixtures first, then a live oracle command if given
    Ask {
        #[arg(long)]
        key: String,
        #[arg(long, default_value = "rank")]
        q: String,
        /// External command speaking the line protocol
        #[arg(long)]
        live: Option<String>,
    },
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    k: usize,
    #[arg(long, allow_hyphen_values = true)]
    nmin: i64,
    #[arg(long, allow_hyphen_values = true)]
    nmax: i64,
    #[arg(long, default_value_t = 1)]
    dmin: i64,
    #[arg(long)]
    dmax: i64,
    /// eq:P, le:P or one
    #[arg(long, default_value = "eq:5")]
    pb: String,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    theorem1: bool,
    #[arg(long, allow_hyphen_values = true)]
    n: Option<BigInt>,
    #[arg(long)]
    d: Option<BigInt>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    b: Option<BigInt>,
    #[arg(long)]
    y: Option<BigInt>,
}

struct Failure(u8, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(BAD_INPUT, e.to_string())
    }
}

type Res = Result<u8, Failure>;

fn emit(v: &Value) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{v}");
}

fn line(s: &str) {
    let mut out = io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

fn emit_ser<T: serde::Serialize>(v: &T) {
    emit(&serde_json::to_value(v).expect("serializable"));
}

fn bad(msg: impl Into<String>) -> Failure {
    Failure(BAD_INPUT, msg.into())
}

fn parse_tuple(s: &str) -> Result<ATuple, Failure> {
    let s = s.trim();
    if s.starts_with('{') {
        return Ok(serde_json::from_str(s)?);
    }
    let a: Vec<i64> = s
        .trim_matches(|c| c == '(' || c == ')' || c == '[' || c == ']')
        .split(',')
        .map(|x| x.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| bad(format!("bad tuple {s:?}: {e}")))?;
    Ok(ATuple::new(a)?)
}

fn load_store(path: &Option<PathBuf>) -> Result<FixtureStore, Failure> {
    match path {
        Some(p) => FixtureStore::load(p).map_err(|e| bad(format!("{}: {e}", p.display()))),
        None => Ok(FixtureStore::bundled()),
    }
}

fn family_from(args: &FamilyArgs) -> Result<(String, CurveFamily), Failure> {
    if let Some(name) = &args.family {
        let spec = by_name(name).ok_or_else(|| bad(format!("unknown family {name:?}")))?;
        return Ok((name.clone(), spec.family()?));
    }
    let (Some(t), Some(p), Some(l), Some(q)) = (&args.tuple, &args.pivots, &args.linear, args.quad) else {
        return Err(bad("give --family NAME or all of --tuple, --pivots, --linear, --quad"));
    };
    if p.len() != 2 || l.len() != 2 {
        return Err(bad("--pivots and --linear take two indices each"));
    }
    let t = ATuple::new(t.clone())?;
    let field = QuadField::new(args.field)?;
    let fam = CurveFamily::derive(&t, (p[0], p[1]), args.scale, field, [l[0], l[1]], q)?;
    Ok((t.to_string(), fam))
}

fn cmd_tuples(a: &TuplesArgs) -> Res {
    let mut base = TupleConstraints::new(a.pmax);
    base.max_sign_changes = a.sign_changes;
    let forced: Vec<(usize, u64)> = a
        .force
        .iter()
        .map(|f| {
            let (i, p) = f.split_once(':').ok_or_else(|| bad(format!("bad --force {f:?}")))?;
            Ok((i.parse()?, p.parse()?))
        })
        .collect::<Result<_, Failure>>()?;
    let mut out: Vec<ATuple> = if a.k == 5 && a.pmax == 5 && a.any && forced == [(1, 5), (2, 5)] {
        generate_k5_candidates()
    } else if a.any && !forced.is_empty() {
        forced.iter().flat_map(|&(i, p)| generate_candidates(a.k, &base.clone().forcing(i, p))).collect()
    } else {
        let c = forced.iter().fold(base, |c, &(i, p)| c.forcing(i, p));
        generate_candidates(a.k, &c)
    };
    out.sort();
    out.dedup();
    for t in &out {
        emit_ser(t);
    }
    eprintln!("{} tuples", out.len());
    Ok(OK)
}

/// Certificates in one line: a bare certificate, a pipeline record, or a sieve report
/// (every verdict of which is replayable).
fn certificates_in(line: &str) -> Result<Vec<Certificate>, String> {
    let v: Value = serde_json::from_str(line).map_err(|e| e.to_string())?;
    if let Some(c) = v.pointer("/fate/certificate") {
        return Ok(vec![serde_json::from_value(c.clone()).map_err(|e| e.to_string())?]);
    }
    if let Some(verdicts) = v.get("verdicts") {
        let coeffs: Vec<i64> = serde_json::from_value(v["tuple"].clone()).map_err(|e| e.to_string())?;
        let t = ATuple::new(coeffs).map_err(|e| e.to_string())?;
        let vs: Vec<SieveVerdict> = serde_json::from_value(verdicts.clone()).map_err(|e| e.to_string())?;
        return Ok(vs.iter().map(|x| Certificate::new(&t, x)).collect());
    }
    Ok(vec![serde_json::from_value(v).map_err(|e| e.to_string())?])
}

fn cmd_sieve(a: &SieveArgs) -> Res {
    if let Some(path) = &a.replay {
        let text = std::fs::read_to_string(path)?;
        let mut failed = 0;
        let mut n = 0;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let certs = certificates_in(line).map_err(|e| bad(format!("line {}: {e}", i + 1)))?;
            for cert in certs {
                let ok = replay(&cert)?;
                n += 1;
                if !ok {
                    failed += 1;
                }
                emit(&json!({"tuple": cert.tuple.coeffs(), "p": cert.p, "outcome": cert.outcome, "replayed": ok}));
            }
        }
        eprintln!("{n} certificates replayed, {failed} failed");
        return Ok(if failed > 0 { FAILED } else { OK });
    }
    let tuples: Vec<ATuple> = if a.tuple.is_empty() {
        io::stdin()
            .lock()
            .lines()
            .map(|l| l.map_err(Failure::from))
            .filter(|l| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
            .map(|l| parse_tuple(&l?))
            .collect::<Result<_, _>>()?
    } else {
        a.tuple.iter().map(|s| parse_tuple(s)).collect::<Result<_, _>>()?
    };
    let primes = a.primes.clone().unwrap_or_else(sieve::default_primes);
    if a.eliminated {
        let (surv, certs) = auto_eliminate(&tuples, &primes)?;
        for c in &certs {
            emit_ser(c);
        }
        eprintln!("{} eliminated, {} survive", certs.len(), surv.len());
        return Ok(OK);
    }
    let mut killed = 0;
    for t in &tuples {
        let r = sieve_tuple(t, &primes)?;
        killed += r.eliminated_at().is_some() as usize;
        emit(&json!({
            "tuple": t.coeffs(),
            "eliminated_at": r.eliminated_at(),
            "certificate": r.certificate(),
            "verdicts": r.verdicts,
        }));
    }
    eprintln!("{killed} of {} eliminated", tuples.len());
    Ok(OK)
}

fn cmd_curves(c: &CurvesCmd) -> Res {
    match c {
        CurvesCmd::Derive { fam, list } => {
            if *list {
                for s in catalog() {
                    emit(&json!({"family": s.name, "tuple": s.tuple, "pivots": [s.pivots.0, s.pivots.1],
                        "scale": s.scale, "field": s.field_d, "linear": s.linear, "quad": s.quad}));
                }
                return Ok(OK);
            }
            let (name, f) = family_from(fam)?;
            let system = pivot_system(&f.tuple, f.i, f.j);
            emit(&json!({
                "family": name,
                "system": system.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                "linear": f.linear.iter().map(|l| json!({"m": l.m(), "c": l.c, "u": l.u, "w": l.w.to_string(), "k": l.k})).collect::<Vec<_>>(),
                "quadratic": {"m": f.quadratic.m(), "c": f.quadratic.c, "a": f.quadratic.a, "b": f.quadratic.b, "k": f.quadratic.k},
            }));
            for d in delta_candidates(&f)? {
                let q = f.curve(&d)?;
                emit(&json!({"delta": d.to_string(), "key": q.canonical_key(), "j": q.j_invariant().to_string()}));
            }
            Ok(OK)
        }
        CurvesCmd::Delta { fam } => {
            let (name, f) = family_from(fam)?;
            let ds = delta_candidates(&f)?;
            let cl = classes(&ds)?;
            emit(&json!({"family": name, "deltas": ds.iter().map(|d| d.to_string()).collect::<Vec<_>>(), "classes": cl}));
            if let Some(spec) = fam.family.as_deref().and_then(by_name) {
                if !spec.printed_deltas.is_empty() {
                    let printed = classes(&spec.printed())?;
                    let same = printed == cl;
                    emit(&json!({"family": name, "printed_classes": printed, "equal": same}));
                    return Ok(if same { OK } else { FAILED });
                }
            }
            Ok(OK)
        }
        CurvesCmd::JinvCheck => {
            let checks = jinv_check()?;
            let bad_n = checks.iter().filter(|c| !c.equal).count();
            for c in &checks {
                emit_ser(c);
            }
            eprintln!("{} models, {bad_n} mismatches", checks.len());
            Ok(if bad_n == 0 { OK } else { FAILED })
        }
        CurvesCmd::Local { key, places } => {
            let q = GenusOneQuartic::from_key(key)?;
            let mut all = true;
            for p in places {
                let place: Place = p.parse().map_err(bad)?;
                let ok = local_solubility(&q, place);
                all &= ok;
                emit(&json!({"key": key, "place": p, "soluble": ok}));
            }
            Ok(if all { OK } else { FAILED })
        }
        CurvesCmd::System { tuple, pivots } => {
            let t = ATuple::new(tuple.clone())?;
            if pivots.len() != 2 || pivots[0] >= pivots[1] || pivots[1] >= t.k() {
                return Err(bad("--pivots i,j with i < j < k"));
            }
            for r in pivot_system(&t, pivots[0], pivots[1]) {
                emit(&json!({"m": r.m, "alpha": r.alpha, "beta": r.beta, "gamma": r.gamma, "relation": r.to_string()}));
            }
            Ok(OK)
        }
    }
}

fn presieved_k5() -> Vec<ATuple> {
    generate_k5_candidates()
        .into_iter()
        .filter(|t| sieve_tuple(t, &[5]).map(|r| r.eliminated_at().is_none()).unwrap_or(false))
        .collect()
}

fn cmd_oracle(c: &OracleCmd, fixtures: &Option<PathBuf>) -> Res {
    match c {
        OracleCmd::Check => {
            let store = load_store(fixtures)?;
            let mut bad_keys = 0;
            for r in store.records() {
                if let Err(e) = GenusOneQuartic::from_key(&r.key) {
                    bad_keys += 1;
                    emit(&json!({"key": r.key, "q": r.q.to_string(), "error": e.to_string()}));
                }
            }
            let ranks = store.records().filter(|r| r.q == Question::Rank).count();
            emit(&json!({"records": store.len(), "rank": ranks, "point_sets": store.len() - ranks, "bad_keys": bad_keys}));
            Ok(if bad_keys == 0 { OK } else { FAILED })
        }
        OracleCmd::Key { fam, rank0, quartic } => {
            if *rank0 {
                for k in quadruple_keys(&presieved_k5())? {
                    line(&k);
                }
                return Ok(OK);
            }
            if let Some(c) = quartic {
                let c: [i64; 5] = c.as_slice().try_into().map_err(|_| bad("--quartic takes five coefficients"))?;
                line(&GenusOneQuartic::from_ints(QuadField::RATIONAL, c)?.canonical_key());
                return Ok(OK);
            }
            let (_, f) = family_from(fam)?;
            for d in delta_candidates(&f)? {
                emit(&json!({"delta": d.to_string(), "key": f.curve(&d)?.canonical_key()}));
            }
            Ok(OK)
        }
        OracleCmd::Catalog => {
            for r in catalog_fixture_records()? {
                line(&r.to_json_line());
            }
            Ok(OK)
        }
        OracleCmd::Ask { key, q, live } => {
            let store = load_store(fixtures)?;
            let q: Question = q.parse().map_err(bad)?;
            let live = live.as_ref().map(|cmd| {
                let mut parts = cmd.split_whitespace().map(str::to_string);
                let prog = parts.next().unwrap_or_default();
                LiveOracle::new(prog, parts.collect())
            });
            let oracle = Chained { fixtures: &store, live: live.as_ref() };
            let ans = oracle.query(key, q)?;
            let v = match ans {
                Some(curves_answer) => json!({"key": key, "q": q.to_string(), "answer": format!("{curves_answer:?}")}),
                None => json!({"key": key, "q": q.to_string(), "answer": null}),
            };
            emit(&v);
            Ok(if v["answer"].is_null() { OPEN } else { OK })
        }
    }
}

fn cmd_search(a: &SearchArgs) -> Res {
    let cond: BCondition = a.pb.parse()?;
    let spec = SearchSpec::new(a.k, (a.nmin, a.nmax), (a.dmin, a.dmax), cond)?;
    let found = search_box(&spec);
    for s in &found {
        emit(&solution_json(s));
    }
    eprintln!("{} solutions in a box of {} points", found.len(), spec.box_size());
    Ok(OK)
}

fn cmd_verify(a: &VerifyArgs, fixtures: &Option<PathBuf>) -> Res {
    if a.theorem1 {
        let store = load_store(fixtures)?;
        let entries = verify_theorem1(&store)?;
        for e in &entries {
            emit_ser(e);
        }
        let open = entries.iter().filter(|e| !e.resolved).count();
        let conclusion = if open == 0 { "no solutions with d>1" } else { "unresolved tuples remain" };
        emit(&json!({"theorem1": conclusion, "tuples": entries.len(), "unresolved": open}));
        eprintln!("{conclusion}");
        return Ok(if open == 0 { OK } else { OPEN });
    }
    let (Some(n), Some(d), Some(k), Some(b), Some(y)) = (&a.n, &a.d, a.k, &a.b, &a.y) else {
        return Err(bad("give --theorem1 or all of --n --d --k --b --y"));
    };
    let r = verify_solution(n, d, k, b, y);
    emit_ser(&r);
    Ok(if r.ok { OK } else { FAILED })
}

fn cmd_reduce(tuple: &[i64], known: &Option<String>, fixtures: &Option<PathBuf>) -> Res {
    let t = ATuple::new(tuple.to_vec())?;
    let known: Vec<ATuple> = match known {
        Some(s) => s.split(';').map(parse_tuple).collect::<Result<_, _>>()?,
        None => {
            // only the k = 7 tuples whose families are settled by the fixtures
            let store = load_store(fixtures)?;
            verify_theorem1(&store)?
                .into_iter()
                .filter(|e| e.k == 7 && e.resolved && matches!(e.reduction, Reduction::Family { .. }))
                .map(|e| ATuple::new(e.tuple).expect("valid"))
                .collect()
        }
    };
    if let Some((offset, to)) = find_subtuple(&t, &known) {
        emit(&json!({"tuple": t.coeffs(), "method": "subtuple", "offset": offset, "to": to.coeffs()}));
        return Ok(OK);
    }
    for start in 0..2 {
        for kt in &known {
            if let Some(h) = half_subprogression(&t, start, kt.k()) {
                if &h == kt || h == kt.mirror() {
                    emit(&json!({"tuple": t.coeffs(), "method": "halving", "start": start, "count": kt.k(), "to": kt.coeffs()}));
                    return Ok(OK);
                }
            }
        }
    }
    emit(&json!({"tuple": t.coeffs(), "method": null}));
    Ok(OPEN)
}

fn cmd_pipeline(k: usize, primes: &Option<Vec<u64>>, height: u64, all: bool, fixtures: &Option<PathBuf>) -> Res {
    if k != 5 {
        return Err(bad("the pipeline is implemented for k = 5"));
    }
    let store = load_store(fixtures)?;
    let opts = PipelineOptions {
        primes: primes.clone().unwrap_or_else(sieve::default_primes),
        rank0: curves::SearchOptions { height, ..Default::default() },
        ..Default::default()
    };
    let report = run_pipeline_k5(&store, &opts)?;
    for t in &report.tuples {
        if all || matches!(t.fate, apsieve_core::pipeline::TupleFate::Unresolved { .. } | apsieve_core::pipeline::TupleFate::Curves { .. } | apsieve_core::pipeline::TupleFate::Congruence { .. }) {
            emit_ser(t);
        }
    }
    emit(&json!({
        "counts": report.counts,
        "curve_stage": report.curve_stage,
        "solutions": report.solutions,
        "rejected": report.rejected,
        "unresolved": report.unresolved().iter().map(|t| t.tuple.clone()).collect::<Vec<_>>(),
    }));
    let c = &report.counts;
    eprintln!(
        "generated {}; mod-5 sieve {}; rank 0 {} (+{} with solutions); congruence {}; curve families {}; unresolved {}",
        c.generated, c.presieve_eliminated, c.rank0_eliminated, c.rank0_solved, c.congruence_eliminated, c.chabauty_resolved, c.unresolved
    );
    eprintln!("solutions with d > 1: {:?}", report.solutions);
    Ok(report.exit_code() as u8)
}

fn run(cli: &Cli) -> Res {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global()?;
    }
    match &cli.cmd {
        Cmd::Alphabet { pmax } => {
            emit(&json!({"pmax": pmax, "alphabet": coefficient_alphabet(*pmax)}));
            Ok(OK)
        }
        Cmd::Tuples(a) => cmd_tuples(a),
        Cmd::Sieve(a) => cmd_sieve(a),
        Cmd::Curves(c) => cmd_curves(c),
        Cmd::Oracle(c) => cmd_oracle(c, &cli.fixtures),
        Cmd::Search(a) => cmd_search(a),
        Cmd::Verify(a) => cmd_verify(a, &cli.fixtures),
        Cmd::Reduce { tuple, known } => cmd_reduce(tuple, known, &cli.fixtures),
        Cmd::Pipeline { k, primes, height, all } => cmd_pipeline(*k, primes, *height, *all, &cli.fixtures),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { BAD_INPUT } else { OK });
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
