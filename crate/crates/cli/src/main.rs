//! `genera`: command-line front end for predimension classes of finite graphs.
//!
//! Exit codes: 0 true/success, 1 false/distinguished, 2 input error, 3 resource cap.

mod load;
mod report;

use clap::{Args, Parser, Subcommand};
use genera_core::amalgam::{
    audit_richness, build_generic_stages, check_arithmetic_witness, check_full_amalgamation_instance, free_amalgam,
    GenericConfig, GluedTriple,
};
use genera_core::anticollapse::{
    is_admissible, is_strong_star, nu, nu_by_maxcut, nu_by_partitions, pattern_key, require_star_sides, bounded1_on,
    AntiCollapseParams, DEFAULT_ZERO_EXT_CAP,
};
use genera_core::closure::{
    closure_in, closure_levels, enumerate_minimal_pairs, external_closure_levels, is_biminimal_pair,
    is_proper_zero_extension, DEFAULT_MAX_EXT,
};
use genera_core::cltp::{cltp, cltp_equal, DEFAULT_CLTP_EXT};
use genera_core::fuzz::{run_suite, FuzzConfig, Suite};
use genera_core::predim::{class_membership, delta, delta_rel, granularity, is_strong, verify_granularity};
use genera_core::rational::{format_rational, parse_rational};
use genera_core::structures::format_structure;
use genera_core::supports::{build_candidate_system, verify_system, SupportKind};
use genera_core::{ClassSpec, Error, Rational, Result};
use report::{exit_code, Report};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "genera", version, about = "Predimension, closure and amalgamation tools for finite graphs")]
struct Cli {
    /// Print `key=value` lines instead of the human layout.
    #[arg(long, global = true)]
    kv: bool,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct SpecArg {
    /// Class: `K:α`, `K+:α`, `K*:r:N[:cap]` or `Kf`.
    #[arg(long)]
    spec: String,
}

impl SpecArg {
    fn get(&self) -> Result<ClassSpec> {
        ClassSpec::parse(&self.spec)
    }
}

#[derive(Args, Debug)]
struct StarArgs {
    #[arg(long)]
    r: String,
    /// S-classes have fewer than N elements.
    #[arg(long)]
    n: usize,
    /// Largest 0-extension examined.
    #[arg(long, default_value_t = DEFAULT_ZERO_EXT_CAP)]
    cap: usize,
}

impl StarArgs {
    fn get(&self) -> Result<AntiCollapseParams> {
        Ok(AntiCollapseParams::new(parse_rational(&self.r)?, self.n)?.with_cap(self.cap))
    }
}

#[derive(Args, Debug)]
struct TripleArgs {
    #[arg(long)]
    b: PathBuf,
    #[arg(long)]
    c: PathBuf,
    /// Identification `b:c,b:c,...` of the shared part.
    #[arg(long, default_value = "")]
    glue: String,
}

impl TripleArgs {
    fn get(&self) -> Result<GluedTriple> {
        Ok(GluedTriple {
            b: load::read_structure(&self.b)?,
            c: load::read_structure(&self.c)?,
            glue: GluedTriple::parse_glue(&self.glue)?,
        })
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// δ(A), or δ(B/A) with its edge bookkeeping when `--b` is given.
    Delta {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: Option<String>,
        #[arg(long, conflicts_with = "spec")]
        alpha: Option<String>,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Whether A is strong in B inside the ambient.
    Strong {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Class membership of a structure.
    Member {
        #[arg(long)]
        ambient: PathBuf,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Granularity 1/q of r = p/q, optionally confirmed over all pairs up to a size.
    Gamma {
        #[arg(long)]
        r: String,
        #[arg(long)]
        verify: Option<usize>,
    },
    /// Least closed superset of a set in the ambient.
    Closure {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        spec: SpecArg,
        /// Also print the intermediate levels.
        #[arg(long)]
        levels: bool,
    },
    /// Minimal pairs (A0, B) with A0 inside the set.
    Minpairs {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = DEFAULT_MAX_EXT)]
        max_ext: usize,
    },
    /// External closure of X relative to M in the ambient.
    Ecl {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        model: String,
        #[arg(long)]
        set: String,
        #[command(flatten)]
        spec: SpecArg,
    },
    /// Whether (X, Z) is a proper 0-extension at coefficient r.
    Zeroext {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        set: String,
        #[arg(long)]
        z: String,
        #[arg(long)]
        r: String,
    },
    /// Free amalgam of B and C over the glued part; with `--spec`, also the
    /// full-amalgamation check.
    Amalgam {
        #[command(flatten)]
        triple: TripleArgs,
        #[arg(long)]
        spec: Option<String>,
    },
    /// Finite stages approximating the generic structure.
    Generic {
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long)]
        stages: usize,
        #[arg(long)]
        max_base: usize,
        #[arg(long)]
        max_ext: usize,
        #[arg(long)]
        out: PathBuf,
        /// Shuffle demand order with this seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 64)]
        max_vertices: usize,
        /// Audit the final stage for unrealized extensions.
        #[arg(long)]
        audit: bool,
    },
    /// Check an arithmetic-witness configuration file.
    ArithWitness {
        config: PathBuf,
        /// Override `n_max` from the file.
        #[arg(long)]
        n_max: Option<usize>,
    },
    /// Admissibility in the anti-collapse class.
    Admissible {
        #[command(flatten)]
        star: StarArgs,
        file: PathBuf,
    },
    /// ν of a structure (or of the substructure on `--set`).
    Nu {
        #[arg(long)]
        r: String,
        #[arg(long)]
        set: Option<String>,
        file: PathBuf,
    },
    /// Whether A ≼* B inside the ambient.
    StarStrong {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        star: StarArgs,
    },
    /// Disjoint proper 0-extensions of a straddling U in B ⊕_A C against ν(U).
    Bounded1 {
        #[command(flatten)]
        triple: TripleArgs,
        /// U in the amalgam's numbering (B first, then new vertices of C).
        #[arg(long)]
        u: String,
        #[command(flatten)]
        star: StarArgs,
    },
    /// Support systems over a closed set M.
    Supports {
        #[command(subcommand)]
        cmd: SupportsCmd,
    },
    /// Closure-type tree of a tuple.
    Cltp {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        tuple: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = DEFAULT_CLTP_EXT)]
        max_ext: usize,
    },
    /// Compare closure types of two tuples up to a depth.
    CltpEq {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        tuple1: String,
        #[arg(long)]
        tuple2: String,
        #[arg(long)]
        depth: usize,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = DEFAULT_CLTP_EXT)]
        max_ext: usize,
    },
    /// Run a property suite over random instances.
    Fuzz {
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Replay a single trial.
        #[arg(long)]
        trial: Option<u64>,
    },
}

#[derive(Subcommand, Debug)]
enum SupportsCmd {
    /// Build a candidate family and check coverage, bound, uniqueness,
    /// free closures and edge closure.
    Verify {
        #[arg(long)]
        ambient: PathBuf,
        #[arg(long)]
        model: String,
        #[command(flatten)]
        spec: SpecArg,
        #[arg(long, default_value = "singletons")]
        kind: String,
        #[arg(long, default_value_t = 1)]
        bound: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = run(cli.cmd);
    match &outcome {
        Ok(r) => print!("{}", r.render(cli.kv)),
        Err(e) if cli.kv => println!("error={e}"),
        Err(e) => eprintln!("genera: {e}"),
    }
    exit_code(&outcome)
}

fn show(r: &Rational) -> String {
    format_rational(r)
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn opt_set<T: ToString>(s: Option<T>) -> String {
    s.map(|w| w.to_string()).unwrap_or_else(|| "none".into())
}

fn run(cmd: Command) -> Result<Report> {
    let mut r = Report::new();
    match cmd {
        Command::Delta { ambient, a, b, alpha, spec } => {
            let g = load::read_structure(&ambient)?;
            let alpha = match (alpha, spec) {
                (Some(t), _) => parse_rational(&t)?,
                (None, Some(s)) => ClassSpec::parse(&s)?.alpha(),
                (None, None) => return Err(Error::Input("give --alpha or --spec".into())),
            };
            let a = load::set_in(&a, &g)?;
            r.line("alpha", show(&alpha));
            match b {
                None => {
                    r.line("delta", show(&delta(&g, a, alpha)));
                }
                Some(b) => {
                    let rd = delta_rel(&g, load::set_in(&b, &g)?, a, alpha)?;
                    r.line("delta_rel", show(&rd.value))
                        .line("new_vertices", rd.new_vertices)
                        .line("internal_edges", rd.internal_edges)
                        .line("edge_boundary", rd.edge_boundary);
                }
            }
            Ok(r)
        }
        Command::Strong { ambient, a, b, spec } => {
            let g = load::read_structure(&ambient)?;
            let c = is_strong(&g, load::set_in(&a, &g)?, load::set_in(&b, &g)?, &spec.get()?)?;
            r.line("strong", yes(c.strong)).line("witness", opt_set(c.witness));
            Ok(r.verdict(c.strong))
        }
        Command::Member { ambient, spec } => {
            let g = load::read_structure(&ambient)?;
            let spec = spec.get()?;
            if let ClassSpec::AntiCollapse(p) = &spec {
                let rep = is_admissible(&g, p)?;
                r.line("member", yes(rep.admissible)).line("cap", rep.cap);
                if let Some(f) = rep.failure {
                    r.line("failure", f);
                }
                return Ok(r.verdict(rep.admissible));
            }
            let m = class_membership(&g, &spec)?;
            r.line("member", yes(m));
            Ok(r.verdict(m))
        }
        Command::Gamma { r: rr, verify } => {
            let q = parse_rational(&rr)?;
            r.line("gamma", show(&granularity(q)?));
            let Some(bound) = verify else { return Ok(r) };
            let rep = verify_granularity(q, bound)?;
            r.line("pairs_checked", rep.pairs_checked)
                .line("bound_holds", yes(rep.bound_holds))
                .line("attained", yes(rep.attained));
            if let Some((g, a, b)) = &rep.attaining {
                r.line("attaining_a", a).line("attaining_b", b).line("attaining", format_structure("attaining", g));
            }
            Ok(r.verdict(rep.bound_holds && rep.attained))
        }
        Command::Closure { ambient, set, spec, levels } => {
            let g = load::read_structure(&ambient)?;
            let (a, spec) = (load::set_in(&set, &g)?, spec.get()?);
            r.line("closure_in_ambient", closure_in(&g, a, &spec)?);
            if levels {
                for (i, l) in closure_levels(&g, a, &spec)?.iter().enumerate() {
                    r.line(&format!("level{i}"), l);
                }
            }
            Ok(r)
        }
        Command::Minpairs { ambient, set, spec, max_ext } => {
            let g = load::read_structure(&ambient)?;
            let (a, spec) = (load::set_in(&set, &g)?, spec.get()?);
            let pairs = enumerate_minimal_pairs(&g, a, &spec, max_ext)?;
            r.line("count", pairs.len()).line("max_ext", max_ext);
            for p in pairs {
                let bi = is_biminimal_pair(&g, p.base, p.ext, &spec)?;
                r.line("pair", format!("{} {} biminimal={}", p.base, p.ext, yes(bi)));
            }
            Ok(r)
        }
        Command::Ecl { ambient, model, set, spec } => {
            let g = load::read_structure(&ambient)?;
            let (m, x) = (load::set_in(&model, &g)?, load::set_in(&set, &g)?);
            let levels = external_closure_levels(&g, m, x, &spec.get()?)?;
            r.line("ecl_in_ambient", levels.last().expect("nonempty"));
            for (i, l) in levels.iter().enumerate() {
                r.line(&format!("level{i}"), l);
            }
            Ok(r)
        }
        Command::Zeroext { ambient, set, z, r: rr } => {
            let g = load::read_structure(&ambient)?;
            let rep = is_proper_zero_extension(&g, load::set_in(&set, &g)?, load::set_in(&z, &g)?, parse_rational(&rr)?)?;
            r.line("proper", yes(rep.proper));
            r.line(
                "chain",
                rep.chain.map_or("none".into(), |c| c.sets.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" < ")),
            );
            r.line("smaller_base", opt_set(rep.smaller_base));
            r.line("split", rep.split.map_or("none".into(), |(p, q)| format!("{p} {q}")));
            Ok(r.verdict(rep.proper))
        }
        Command::Amalgam { triple, spec } => {
            let t = triple.get()?;
            let am = free_amalgam(&t)?;
            r.line("a_in_d", am.a_set()).line("b_in_d", am.b_set()).line("c_in_d", am.c_set());
            r.line("c_map", format!("{:?}", am.from_c));
            r.line("amalgam", format_structure("amalgam", &am.structure));
            let Some(s) = spec else { return Ok(r) };
            let rep = check_full_amalgamation_instance(&t, &ClassSpec::parse(&s)?)?;
            r.line("c_strong", yes(rep.c_strong))
                .line("c_witness", opt_set(rep.c_witness))
                .line("d_in_class", yes(rep.d_in_class));
            Ok(r.verdict(rep.holds()))
        }
        Command::Generic { spec, stages, max_base, max_ext, out, seed, max_vertices, audit } => {
            let mut cfg = GenericConfig::new(spec.get()?, stages, max_base, max_ext);
            cfg.seed = seed;
            cfg.max_vertices = max_vertices;
            generic(&cfg, &out, audit, r)
        }
        Command::ArithWitness { config, n_max } => {
            let mut cfg = load::witness_config(&load::read_text(&config)?)?;
            if let Some(n) = n_max {
                cfg.n_max = n;
            }
            let rep = check_arithmetic_witness(&cfg)?;
            r.line("holds", yes(rep.holds)).line("n_max", cfg.n_max);
            if let Some((c, why)) = &rep.failed_clause {
                r.line("failed_clause", c).line("reason", why);
            }
            if let Some(p) = &rep.placement {
                r.line("placement", format!("{p:?}"));
            }
            Ok(r.verdict(rep.holds))
        }
        Command::Admissible { star, file } => {
            let g = load::read_structure(&file)?;
            let rep = is_admissible(&g, &star.get()?)?;
            r.line("admissible", yes(rep.admissible)).line("cap", rep.cap);
            if let Some(f) = rep.failure {
                r.line("failure", f);
            }
            Ok(r.verdict(rep.admissible))
        }
        Command::Nu { r: rr, set, file } => {
            let g = load::read_structure(&file)?;
            let g = match set {
                Some(s) => g.restrict(load::set_in(&s, &g)?)?,
                None => g,
            };
            let p = AntiCollapseParams::new(parse_rational(&rr)?, 2)?;
            r.line("nu", nu(&g, &p))
                .line("nu_by_partitions", nu_by_partitions(&g, &p))
                .line("nu_by_maxcut", nu_by_maxcut(&g, &p));
            Ok(r)
        }
        Command::StarStrong { ambient, a, b, star } => {
            let g = load::read_structure(&ambient)?;
            let rep = is_strong_star(&g, load::set_in(&a, &g)?, load::set_in(&b, &g)?, &star.get()?)?;
            r.line("star_strong", yes(rep.strong))
                .line("failed_clause", rep.failed_clause.unwrap_or("none"))
                .line("witness", opt_set(rep.witness));
            Ok(r.verdict(rep.strong))
        }
        Command::Bounded1 { triple, u, star } => {
            let p = star.get()?;
            let am = free_amalgam(&triple.get()?)?;
            require_star_sides(&am, &p)?;
            let u = load::set_in(&u, &am.structure)?;
            let rep = bounded1_on(&am, u, &p, p.zero_ext_cap)?;
            r.line("report", &rep).line("c_map", format!("{:?}", am.from_c));
            for z in &rep.family {
                r.line("extension", z);
            }
            Ok(r.verdict(rep.holds))
        }
        Command::Supports { cmd: SupportsCmd::Verify { ambient, model, spec, kind, bound } } => {
            let g = load::read_structure(&ambient)?;
            let spec = spec.get()?;
            let sys = build_candidate_system(&g, load::set_in(&model, &g)?, &spec, SupportKind::parse(&kind)?)?;
            let rep = verify_system(&g, &sys, &spec, bound)?;
            r.line("members", sys.members.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" "));
            r.line("external", rep.external);
            for (name, c) in [
                ("coverage", &rep.coverage),
                ("bounded", &rep.bounded),
                ("unique_supports", &rep.unique_supports),
                ("free_closures", &rep.free_closures),
                ("edge_closed", &rep.edge_closed),
            ] {
                r.line(name, c.witness.as_ref().map_or("OK".into(), |w| format!("FAIL {w}")));
            }
            Ok(r.verdict(rep.all_hold()))
        }
        Command::Cltp { ambient, tuple, depth, spec, max_ext } => {
            let g = load::read_structure(&ambient)?;
            let tree = cltp(&g, &load::tuple(&tuple)?, depth, &spec.get()?, max_ext)?;
            r.line("ambient", ambient.display()).line("nodes", tree.node_count()).line("tree", &tree);
            Ok(r)
        }
        Command::CltpEq { ambient, tuple1, tuple2, depth, spec, max_ext } => {
            let g = load::read_structure(&ambient)?;
            let cmp = cltp_equal(&g, &load::tuple(&tuple1)?, &load::tuple(&tuple2)?, depth, &spec.get()?, max_ext)?;
            r.line("ambient", ambient.display()).line("equal", yes(cmp.equal));
            r.line("distinguishing_depth", cmp.distinguishing_depth.map_or(format!("none <= {depth}"), |d| d.to_string()));
            if let Some(c) = cmp.certificate {
                r.line("certificate", c);
            }
            Ok(r.verdict(cmp.equal))
        }
        Command::Fuzz { suite, spec, trials, max_vertices, seed, trial } => {
            let mut cfg = FuzzConfig::new(Suite::parse(&suite)?, spec.get()?, trials, max_vertices, seed);
            cfg.trial = trial;
            let rep = run_suite(&cfg)?;
            r.line("suite", rep.suite)
                .line("spec", &rep.spec)
                .line("trials", rep.trials_run)
                .line("skipped", rep.skipped)
                .line("result", if rep.passed() { "pass" } else { "fail" });
            if let Some(f) = &rep.failure {
                r.line("trial", f.trial)
                    .line("message", &f.message)
                    .line("minimized_message", &f.minimized_message)
                    .line("replay", &f.replay)
                    .line("minimized", &f.minimized);
            }
            Ok(r.verdict(rep.passed()))
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display())))
}

fn generic(cfg: &GenericConfig, out: &Path, audit: bool, mut r: Report) -> Result<Report> {
    std::fs::create_dir_all(out).map_err(|e| Error::Input(format!("cannot create {}: {e}", out.display())))?;
    let build = build_generic_stages(cfg);
    let mut log = format!(
        "# spec={} stages={} max_base={} max_ext={} max_vertices={} seed={}\n",
        cfg.spec,
        cfg.stages,
        cfg.max_base,
        cfg.max_ext,
        cfg.max_vertices,
        cfg.seed.map_or("none".into(), |s| s.to_string())
    );
    for st in &build.stages {
        let name = format!("stage_{:02}", st.stage_index);
        write_file(&out.join(format!("{name}.txt")), &format_structure(&name, &st.structure))?;
        r.line(&name, format!("vertices={} edges={}", st.structure.n(), st.structure.edge_count()));
        for a in &st.provenance {
            log.push_str(&format!(
                "stage {} base {} ext +{} [{}] new {}\n",
                a.stage,
                a.base,
                a.extension.extension_size(),
                pattern_key(&a.extension).hex(),
                a.new_vertices
            ));
        }
    }
    if let Some(e) = &build.halted {
        log.push_str(&format!("# halted: {e}\n"));
    }
    write_file(&out.join("provenance.log"), &log)?;
    r.line("out", out.display());
    if let Some(e) = build.halted {
        eprintln!("genera: {e}");
        return Err(e);
    }
    if audit {
        let last = &build.stages.last().expect("stage 0").structure;
        let gaps = audit_richness(last, &cfg.spec, cfg.max_base, cfg.max_ext)?;
        r.line("audit_gaps", gaps.len());
        for (base, p) in gaps.iter().take(10) {
            r.line("gap", format!("base {base} ext +{}", p.extension_size()));
        }
        return Ok(r.verdict(gaps.is_empty()));
    }
    Ok(r)
}
