use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use torifan::checks::{run_checks, Status};
use torifan::divisor::{anticanonical_divisor, class_group_rank};
use torifan::fan::{bundle_over_p1, bundle_over_p2, flip_at};
use torifan::intersection::{mori_cone, nef_cone_of};
use torifan::io::{fan_from_json, fan_to_json, parse_divisor, parse_point, q_json};
use torifan::mmp::{classify_ray, two_ray_game, DEFAULT_MAX_FLIPS};
use torifan::scalar::fmt_q;
use torifan::singularity::{discrepancy, gorenstein_index, is_canonical, is_terminal, Verdict};
use torifan::volume::{anticanonical_volume, triple};
use torifan::{BigInt, Fan, Rational};

#[derive(Parser)]
#[command(
    name = "torifan",
    version,
    about = "Exact computations on complete simplicial toric threefolds"
)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where the fan comes from: a JSON file or a built-in bundle.
#[derive(Args)]
struct FanSource {
    /// Fan file: {"rays": [[x,y,z],...], "max_cones": [[i,j,k],...], "names": [...]}.
    fan: Option<PathBuf>,
    /// Twist alpha of P(O + O(alpha) + O(beta)) over P^1 (with --beta).
    #[arg(long, requires = "beta")]
    alpha: Option<i64>,
    /// Twist beta of P(O + O(alpha) + O(beta)) over P^1 (with --alpha).
    #[arg(long, requires = "alpha")]
    beta: Option<i64>,
    /// Twist a of P(O + O(a)) over P^2.
    #[arg(long, conflicts_with_all = ["alpha", "beta"])]
    twist: Option<i64>,
}

impl FanSource {
    fn load(&self) -> anyhow::Result<Fan> {
        match (&self.fan, self.alpha.zip(self.beta), self.twist) {
            (Some(path), None, None) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                fan_from_json(&text).with_context(|| format!("loading {}", path.display()))
            }
            (None, Some((a, b)), None) => Ok(bundle_over_p1(a, b)?),
            (None, None, Some(t)) => Ok(bundle_over_p2(t)?),
            (None, None, None) => bail!("give a fan file, --alpha/--beta, or --twist"),
            _ => bail!("give exactly one of: a fan file, --alpha/--beta, --twist"),
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Rays, cones, Picard rank, singularity flags and -K^3.
    Info(FanSource),
    /// Flip across an interior wall.
    Flip {
        #[command(flatten)]
        src: FanSource,
        /// Wall as two rays, by index or name: `--wall 1,2` or `--wall D1,D2`.
        #[arg(long)]
        wall: String,
    },
    /// Extremal rays of the Mori cone with their contraction types.
    Mori(FanSource),
    /// Nef cone generators, or whether `--divisor` is nef.
    Nef {
        #[command(flatten)]
        src: FanSource,
        /// Per-ray coefficients, e.g. `1,0,0,2,0` or `["1/2",0,0,1,0]`.
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Terminality test by lattice point enumeration.
    Terminal(FanSource),
    /// Canonicity test by lattice point enumeration.
    Canonical(FanSource),
    /// Discrepancy of the divisor obtained by subdividing at a primitive point.
    Discrepancy {
        #[command(flatten)]
        src: FanSource,
        #[arg(long, value_name = "x,y,z")]
        point: String,
    },
    /// -K^3, or D^3 for `--divisor`.
    Volume {
        #[command(flatten)]
        src: FanSource,
        #[arg(long)]
        divisor: Option<String>,
    },
    /// Two-ray game on a Picard rank 2 fan (cap: TORIFAN_MAX_FLIPS, default 64).
    Tworay(FanSource),
    /// Recompute the built-in golden checklist.
    VerifyPaper {
        /// Run one group: volumes, wps, bundle, flip, singularities, audit, properties, tworay.
        #[arg(long)]
        only: Option<String>,
    },
}

fn ray_ref(f: &Fan, s: &str) -> anyhow::Result<usize> {
    let s = s.trim();
    if let Ok(i) = s.parse::<usize>() {
        if i < f.num_rays() {
            return Ok(i);
        }
        bail!("ray index {i} out of range (fan has {} rays)", f.num_rays());
    }
    f.find_ray_by_name(s)
        .ok_or_else(|| anyhow!("no ray named {s:?}"))
}

fn print(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("serializable"));
}

fn verdict_json(f: &Fan, v: &Verdict<BigInt>) -> Value {
    json!({
        "holds": v.holds,
        "witness": v.witness.as_ref().map(|w| json!({
            "point": w.point.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "cone": f.cones()[w.cone].rays.iter().map(|&r| f.ray_name(r)).collect::<Vec<_>>(),
            "discrepancy": q_json(&w.value),
        })),
    })
}

fn cone_label(f: &Fan, rays: &[usize]) -> String {
    let names: Vec<String> = rays.iter().map(|&r| f.ray_name(r)).collect();
    format!("<{}>", names.join(","))
}

fn info(f: &Fan, as_json: bool) -> anyhow::Result<()> {
    let rho = class_group_rank(f);
    let (terminal, canonical, index) = if f.is_complete() {
        (
            Some(is_terminal(f)?.holds),
            Some(is_canonical(f)?.holds),
            Some(gorenstein_index(f)?),
        )
    } else {
        (None, None, None)
    };
    let volume = anticanonical_volume(f);
    if as_json {
        print(&json!({
            "fan": fan_to_json(f),
            "multiplicities": f.cones().iter().map(|c| c.multiplicity.to_string()).collect::<Vec<_>>(),
            "rho": rho,
            "complete": f.is_complete(),
            "smooth": f.is_smooth(),
            "terminal": terminal,
            "canonical": canonical,
            "gorenstein_index": index.as_ref().map(ToString::to_string),
            "anticanonical_volume": volume.as_ref().ok().map(q_json),
        }));
        return Ok(());
    }
    println!("rays:");
    for (i, r) in f.rays().iter().enumerate() {
        println!("  {i} {} {r}", f.ray_name(i));
    }
    println!("cones:");
    for c in f.cones() {
        println!("  {} mult {}", cone_label(f, &c.rays), c.multiplicity);
    }
    let flag = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
    println!("rho: {rho}");
    println!("complete: {}", f.is_complete());
    println!("smooth: {}", f.is_smooth());
    println!("terminal: {}", flag(terminal));
    println!("canonical: {}", flag(canonical));
    match &index {
        Some(i) => println!(
            "gorenstein index: {i} (gorenstein: {})",
            *i == BigInt::from(1)
        ),
        None => println!("gorenstein index: n/a"),
    }
    match &volume {
        Ok(v) => println!("-K^3: {}", fmt_q(v)),
        Err(e) => println!("-K^3: n/a ({e})"),
    }
    Ok(())
}

fn flip_cmd(f: &Fan, wall: &str, as_json: bool) -> anyhow::Result<()> {
    let (a, b) = wall
        .split_once(',')
        .ok_or_else(|| anyhow!("--wall expects two rays separated by a comma"))?;
    let (a, b) = (ray_ref(f, a)?, ray_ref(f, b)?);
    let g = flip_at(f, a, b)?;
    let removed: Vec<String> = f
        .cones()
        .iter()
        .filter(|c| g.cone_index(c.rays).is_none())
        .map(|c| cone_label(f, &c.rays))
        .collect();
    let added: Vec<String> = g
        .cones()
        .iter()
        .filter(|c| f.cone_index(c.rays).is_none())
        .map(|c| cone_label(&g, &c.rays))
        .collect();
    if as_json {
        print(&json!({"removed": removed, "added": added, "fan": fan_to_json(&g)}));
    } else {
        println!("removed: {}", removed.join(" "));
        println!("added: {}", added.join(" "));
        println!("{}", fan_to_json(&g));
    }
    Ok(())
}

fn mori_cmd(f: &Fan, as_json: bool) -> anyhow::Result<()> {
    let mori = mori_cone(f)?;
    let classes = (0..mori.rays.len())
        .map(|r| classify_ray(f, &mori, r))
        .collect::<torifan::Result<Vec<_>>>()?;
    if as_json {
        print(&json!({
            "rho": mori.space.dim(),
            "rays": classes.iter().map(|c| c.to_json(f)).collect::<Vec<_>>(),
        }));
        return Ok(());
    }
    println!("rho: {}", mori.space.dim());
    for c in &classes {
        let gen: Vec<String> = c.generator.iter().map(fmt_q).collect();
        let walls: Vec<String> = c
            .walls
            .iter()
            .map(|&w| f.wall_label(&f.interior_walls()[w]))
            .collect();
        println!("ray {} [{}]: {}", c.ray, gen.join(","), c.describe(f));
        println!("  walls: {}", walls.join(" "));
    }
    Ok(())
}

fn nef_cmd(f: &Fan, divisor: Option<&str>, as_json: bool) -> anyhow::Result<()> {
    if let Some(d) = divisor {
        let d = parse_divisor(d, f.num_rays())?;
        let nef = torifan::intersection::is_nef(f, &d)?;
        if as_json {
            print(&json!({"divisor": d.to_string(), "nef": nef}));
        } else {
            println!("nef: {nef}");
        }
        return Ok(());
    }
    let mori = mori_cone(f)?;
    let nef = nef_cone_of(f, &mori)?;
    if as_json {
        print(&json!({
            "generators": nef.generators.iter().map(|g| g.iter().map(q_json).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "divisors": nef.divisors.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "full_dimensional": nef.is_full_dimensional(),
        }));
        return Ok(());
    }
    for (g, d) in nef.generators.iter().zip(&nef.divisors) {
        let g: Vec<String> = g.iter().map(fmt_q).collect();
        println!("[{}] represented by {d}", g.join(","));
    }
    println!("full-dimensional: {}", nef.is_full_dimensional());
    Ok(())
}

fn verdict_cmd(f: &Fan, v: Verdict<BigInt>, what: &str, as_json: bool) {
    if as_json {
        print(&verdict_json(f, &v));
        return;
    }
    println!("{what}: {}", v.holds);
    if let Some(w) = &v.witness {
        println!(
            "witness: {} in {} with discrepancy {}",
            w.point,
            cone_label(f, &f.cones()[w.cone].rays),
            fmt_q(&w.value)
        );
    }
}

fn discrepancy_cmd(f: &Fan, point: &str, as_json: bool) -> anyhow::Result<()> {
    let p = parse_point(point)?;
    let rep = discrepancy(f, &p)?;
    if as_json {
        print(&json!({
            "point": p.0.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "cone": cone_label(f, &f.cones()[rep.cone].rays),
            "face": rep.face.iter().map(|&r| f.ray_name(r)).collect::<Vec<_>>(),
            "discrepancy": q_json(&rep.value),
        }));
    } else {
        println!("{}", fmt_q(&rep.value));
    }
    Ok(())
}

fn volume_cmd(f: &Fan, divisor: Option<&str>, as_json: bool) -> anyhow::Result<()> {
    let (d, v): (_, Rational) = match divisor {
        Some(s) => {
            let d = parse_divisor(s, f.num_rays())?;
            let v = triple(f, &d, &d, &d)?;
            (d, v)
        }
        None => (anticanonical_divisor(f), anticanonical_volume(f)?),
    };
    if as_json {
        print(&json!({"divisor": d.to_string(), "volume": q_json(&v)}));
    } else {
        println!("{}", fmt_q(&v));
    }
    Ok(())
}

fn max_flips() -> anyhow::Result<usize> {
    match std::env::var("TORIFAN_MAX_FLIPS") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| anyhow!("TORIFAN_MAX_FLIPS must be a nonnegative integer, got {s:?}")),
        Err(_) => Ok(DEFAULT_MAX_FLIPS),
    }
}

fn tworay_cmd(f: &Fan, as_json: bool) -> anyhow::Result<()> {
    let rep = two_ray_game(f, max_flips()?)?;
    if as_json {
        print(&rep.to_json(f));
        return Ok(());
    }
    let opt = |v: &Option<Rational>| v.as_ref().map_or("n/a".to_string(), fmt_q);
    println!(
        "start: -K^3 {}, terminal {}",
        opt(&rep.start_volume),
        rep.start_terminal
    );
    for (name, side) in [("left", &rep.left), ("right", &rep.right)] {
        println!("{name}:");
        for (i, st) in side.steps.iter().enumerate() {
            let walls: Vec<String> = st
                .flipped
                .iter()
                .map(|p| format!("tau({},{})", f.ray_name(p[0]), f.ray_name(p[1])))
                .collect();
            println!(
                "  step {}: flip {} (K-{}), -K^3 {}, terminal {}",
                i + 1,
                walls.join(" "),
                st.k_sign,
                opt(&st.volume),
                st.terminal
            );
        }
        println!("  end: {}", side.end.describe(&side.end_fan));
    }
    Ok(())
}

enum Outcome {
    Ok,
    ChecksFailed,
}

fn verify(only: Option<&str>, as_json: bool) -> anyhow::Result<Outcome> {
    let results = run_checks(only)?;
    if as_json {
        println!("{}", serde_json::to_string_pretty(&results)?);
    } else {
        let width = results.iter().map(|r| r.check_id.len()).max().unwrap_or(0);
        for r in &results {
            println!(
                "{:<5}  {:<width$}  expected: {}  computed: {}  [{}]",
                r.status.to_string(),
                r.check_id,
                r.expected,
                r.computed,
                r.citation
            );
        }
        let count = |s: Status| results.iter().filter(|r| r.status == s).count();
        println!(
            "{} checks: {} PASS, {} FAIL, {} AUDIT",
            results.len(),
            count(Status::Pass),
            count(Status::Fail),
            count(Status::Audit)
        );
    }
    Ok(if results.iter().any(|r| r.status == Status::Fail) {
        Outcome::ChecksFailed
    } else {
        Outcome::Ok
    })
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let j = cli.json;
    match cli.cmd {
        Cmd::Info(src) => info(&src.load()?, j)?,
        Cmd::Flip { src, wall } => flip_cmd(&src.load()?, &wall, j)?,
        Cmd::Mori(src) => mori_cmd(&src.load()?, j)?,
        Cmd::Nef { src, divisor } => nef_cmd(&src.load()?, divisor.as_deref(), j)?,
        Cmd::Terminal(src) => {
            let f = src.load()?;
            let v = is_terminal(&f)?;
            verdict_cmd(&f, v, "terminal", j);
        }
        Cmd::Canonical(src) => {
            let f = src.load()?;
            let v = is_canonical(&f)?;
            verdict_cmd(&f, v, "canonical", j);
        }
        Cmd::Discrepancy { src, point } => discrepancy_cmd(&src.load()?, &point, j)?,
        Cmd::Volume { src, divisor } => volume_cmd(&src.load()?, divisor.as_deref(), j)?,
        Cmd::Tworay(src) => tworay_cmd(&src.load()?, j)?,
        Cmd::VerifyPaper { only } => return verify(only.as_deref(), j),
    }
    Ok(Outcome::Ok)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
