use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use latmin::catalog2d::{
    classify_window_set, enumerate_candidates, generate, generate_forced, local_boundary_forms,
    lookup, registry_ids, registry_members, Params, FAMILIES,
};
use latmin::currents::{
    certify_up_to_radius, find_minimal_current, validate_certificate, Certificate, Outcome,
};
use latmin::energy::{coarea_check, dirichlet_energy, VertexFunction};
use latmin::lattice::{Grid2, Pattern, Point, VertexSet, Window};
use latmin::mincut::least_perimeter_solve;
use latmin::{props, render, skeleton, Error};

#[derive(Parser)]
#[command(
    name = "latmin",
    version,
    about = "Area-minimizing subgraphs of integer lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Least-perimeter filling of a GRID2 boundary trace.
    Solve(SolveArgs),
    /// Certify or refute minimality of a pattern on balls of radius 1..=r.
    Certify(CertifyArgs),
    /// Edge energy (sum of absolute differences) of a FUNC2 function.
    Energy(FuncArgs),
    /// Compare the energy with the co-area sum of superlevel perimeters.
    Coarea(FuncArgs),
    /// Parametric pattern families of Z².
    #[command(subcommand)]
    Catalog(CatalogCommand),
    /// Cubical k-skeleton of a pattern and its statistics.
    Skeleton(SkeletonArgs),
    /// Structural property checks.
    Props(PropsArgs),
    /// ASCII or SVG picture of a planar pattern.
    Render(RenderArgs),
    /// Exhaustive least-perimeter window patterns on a small ball.
    Enumerate(EnumerateArgs),
}

#[derive(Args)]
struct WindowArg {
    /// A radius `r` (the ball around --center) or `lo... hi...` corners.
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    window: Vec<i64>,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    center: Option<Vec<i64>>,
}

impl WindowArg {
    fn center(&self, dim: usize) -> Result<Point, Error> {
        match &self.center {
            Some(c) if c.len() == dim => Ok(Point::new(c.clone())),
            Some(c) => Err(Error::DimensionMismatch {
                expected: dim,
                got: c.len(),
            }),
            None => Ok(Point::origin(dim)),
        }
    }

    fn resolve(&self, dim: usize) -> Result<Window, Error> {
        match self.window.len() {
            1 => Ok(Window::ball(&self.center(dim)?, self.window[0])),
            n if n == 2 * dim => {
                Window::new(self.window[..dim].to_vec(), self.window[dim..].to_vec())
            }
            n => Err(Error::Invalid(format!(
                "--window takes a radius or {} corner coordinates, got {n} values",
                2 * dim
            ))),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    phi: PathBuf,
    /// Optional check that the grid's window is this box.
    #[arg(long, num_args = 4, allow_negative_numbers = true)]
    window: Option<Vec<i64>>,
    /// Where to write the optimizer grid (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertifyArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    radius: i64,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    center: Option<Vec<i64>>,
    /// Directory receiving one certificate file per radius.
    #[arg(long)]
    cert_dir: Option<PathBuf>,
    /// Where to write the refutation witness (GRID2, planar patterns only).
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Validate an existing certificate file against the pattern instead.
    #[arg(long)]
    verify: Option<PathBuf>,
}

#[derive(Args)]
struct FuncArgs {
    #[arg(long)]
    func: PathBuf,
}

#[derive(Subcommand)]
enum CatalogCommand {
    /// Registered family ids with constraints and defaults.
    List,
    /// Write one family member as a pattern file.
    Gen(GenArgs),
    /// Certify registry members up to a radius.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct GenArgs {
    id: String,
    #[arg(long)]
    h: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    b: Option<i64>,
    /// Skip the parameter constraint.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, conflicts_with = "id")]
    all: bool,
    #[arg(long)]
    id: Vec<String>,
    #[arg(long, default_value_t = 12)]
    radius: i64,
}

#[derive(Args)]
struct SkeletonArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    k: usize,
    #[command(flatten)]
    window: WindowArg,
    /// Also emit rough-isometry statistics for the ball of this radius.
    #[arg(long)]
    stats: Option<i64>,
}

#[derive(Args)]
struct PropsArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[arg(long)]
    all: bool,
    /// Only this property (min-degree, convexity, no-parallel-rays,
    /// max-principle, slab-refutation, growth).
    #[arg(long, required_unless_present = "all")]
    property: Vec<String>,
    #[arg(long)]
    window: i64,
    #[arg(long, num_args = 1.., allow_negative_numbers = true)]
    center: Option<Vec<i64>>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    pattern: PathBuf,
    #[command(flatten)]
    window: WindowArg,
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Overlay a minimal current on the window when one exists.
    #[arg(long)]
    current: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(long)]
    radius: i64,
    /// Maximum number of symmetry-distinct traces to examine.
    #[arg(long, default_value_t = usize::MAX)]
    budget: usize,
    /// Write every candidate as GRID2 blocks to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A finished command: its ordered output and whether it found a
/// refutation or violation.
struct Run {
    out: String,
    found: bool,
}

impl Run {
    fn ok(out: String) -> Run {
        Run { out, found: false }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(Error::from)
}

fn load_pattern(path: &Path) -> Result<Pattern, Error> {
    Pattern::from_json(&read(path)?)
}

fn center_of(c: &Option<Vec<i64>>, dim: usize) -> Result<Point, Error> {
    WindowArg {
        window: vec![],
        center: c.clone(),
    }
    .center(dim)
}

fn fmt_point(p: &Point) -> String {
    let c: Vec<String> = p.coords().iter().map(|v| v.to_string()).collect();
    c.join(",")
}

fn solve(a: SolveArgs) -> Result<Run, Error> {
    let grid = Grid2::parse(&read(&a.phi)?)?;
    let phi = grid.to_set()?;
    if let Some(w) = &a.window {
        let want = Window::new([w[0], w[1]], [w[2], w[3]])?;
        if &want != phi.window() {
            return Err(Error::Invalid(format!(
                "--window does not match the grid's window {:?}",
                phi.window()
            )));
        }
    }
    let best = least_perimeter_solve(phi.window(), &phi)?;
    let rendered = Grid2::from_set(&best.set)?.render();
    let mut out = format!("value {}\n", best.value);
    match &a.out {
        Some(p) => fs::write(p, rendered)?,
        None => out.push_str(&rendered),
    }
    Ok(Run::ok(out))
}

fn certify(a: CertifyArgs) -> Result<Run, Error> {
    let pattern = load_pattern(&a.pattern)?;
    if let Some(path) = &a.verify {
        let cert = Certificate::parse(&read(path)?)?;
        let good = validate_certificate(&cert, &pattern);
        let verdict = if good { "valid" } else { "invalid" };
        return Ok(Run {
            out: format!("CERT r={} {verdict}\n", cert.radius),
            found: !good,
        });
    }
    let center = center_of(&a.center, pattern.dim)?;
    let report = certify_up_to_radius(&pattern, &center, a.radius)?;
    if let Some(dir) = &a.cert_dir {
        fs::create_dir_all(dir)?;
    }
    let mut out = String::new();
    for o in &report.outcomes {
        match o {
            Outcome::Certified(c) => {
                writeln!(out, "CERT r={} hash={}", c.radius, c.hash()).unwrap();
                if let Some(dir) = &a.cert_dir {
                    fs::write(dir.join(format!("r{:02}.cert", c.radius)), c.to_text())?;
                }
            }
            Outcome::Refuted(r) => {
                writeln!(
                    out,
                    "REFUTED r={} perimeter={} competitor={}",
                    r.radius, r.pattern_perimeter, r.witness_perimeter
                )
                .unwrap();
            }
        }
    }
    let Some(r) = report.first_refutation() else {
        writeln!(
            out,
            "certified to radius {} (window evidence, not a proof of minimality)",
            a.radius
        )
        .unwrap();
        return Ok(Run::ok(out));
    };
    writeln!(
        out,
        "refuted at radius {}: the pattern is not minimal",
        r.radius
    )
    .unwrap();
    let own = VertexSet::from_pattern(&r.witness.window().clone(), &pattern);
    let changed: Vec<String> = r
        .witness
        .window()
        .points()
        .filter(|p| r.witness.get(p) != own.get(p))
        .map(|p| fmt_point(&p))
        .collect();
    writeln!(
        out,
        "witness flips {} vertices: {}",
        changed.len(),
        changed.join(" ")
    )
    .unwrap();
    if let Some(path) = &a.witness {
        fs::write(path, Grid2::from_set(&r.witness)?.render())?;
        writeln!(out, "witness written to {}", path.display()).unwrap();
    }
    Ok(Run { out, found: true })
}

fn energy(a: FuncArgs, coarea: bool) -> Result<Run, Error> {
    let f = VertexFunction::parse_func2(&read(&a.func)?)?;
    let w = f.window().clone();
    if !coarea {
        return Ok(Run::ok(format!("energy {}\n", dirichlet_energy(&f, &w)?)));
    }
    let r = coarea_check(&f, &w)?;
    Ok(Run {
        out: format!("lhs {}\nrhs {}\nequal {}\n", r.lhs, r.rhs, r.equal),
        found: !r.equal,
    })
}

fn catalog(c: CatalogCommand) -> Result<Run, Error> {
    match c {
        CatalogCommand::List => {
            let mut out = String::new();
            for f in FAMILIES {
                writeln!(
                    out,
                    "{:<8} uses={:<4} defaults={} constraint=\"{}\" confidence={:?} complement={}",
                    f.id,
                    f.uses,
                    f.defaults,
                    f.constraint,
                    f.confidence,
                    if f.has_complement { "yes" } else { "no" }
                )
                .unwrap();
            }
            Ok(Run::ok(out))
        }
        CatalogCommand::Gen(g) => {
            let fam = lookup(&g.id)?;
            let d = fam.family.defaults;
            let params = Params::new(
                g.h.unwrap_or(d.h),
                g.d.unwrap_or(d.d),
                g.a.unwrap_or(d.a),
                g.b.unwrap_or(d.b),
            );
            let m = if g.force {
                generate_forced(&g.id, &params)?
            } else {
                generate(&g.id, &params)?
            };
            let json = m.pattern.to_json() + "\n";
            match g.out {
                Some(p) => {
                    fs::write(&p, json)?;
                    Ok(Run::ok(format!(
                        "{} {} center {}\n",
                        m.id,
                        params,
                        fmt_point(&m.center)
                    )))
                }
                None => Ok(Run::ok(json)),
            }
        }
        CatalogCommand::Verify(v) => {
            let members = registry_members();
            let chosen: Vec<_> = if v.all {
                members
            } else {
                for id in &v.id {
                    if !registry_ids().contains(id) {
                        return Err(Error::UnknownFamily(id.clone()));
                    }
                }
                members
                    .into_iter()
                    .filter(|m| v.id.contains(&m.id))
                    .collect()
            };
            if chosen.is_empty() {
                return Err(Error::Invalid("give --all or at least one --id".into()));
            }
            let mut out = String::new();
            let mut found = false;
            for m in &chosen {
                let rep = certify_up_to_radius(&m.pattern, &m.center, v.radius)?;
                match rep.first_refutation() {
                    None => writeln!(
                        out,
                        "{} {} certified to radius {}",
                        m.id, m.params, v.radius
                    )
                    .unwrap(),
                    Some(r) => {
                        found = true;
                        writeln!(out, "{} {} refuted at radius {}", m.id, m.params, r.radius)
                            .unwrap()
                    }
                }
            }
            Ok(Run { out, found })
        }
    }
}

fn skeleton_cmd(a: SkeletonArgs) -> Result<Run, Error> {
    let pattern = load_pattern(&a.pattern)?;
    let w = a.window.resolve(pattern.dim)?;
    let sk = skeleton::k_skeleton(&pattern, a.k, &w)?;
    let mut out = String::new();
    let members = pattern.members_in(&w).len();
    writeln!(
        out,
        "dim={} k={} members={} skeleton={}",
        pattern.dim,
        a.k,
        members,
        sk.members_in_window().len()
    )
    .unwrap();
    if pattern.dim == 2 {
        out.push_str(&Grid2::from_set(&sk)?.render());
    }
    if let Some(r) = a.stats {
        let center = a.window.center(pattern.dim)?;
        let s = skeleton::rough_isometry_stats(&pattern, &center, r)?;
        let dist = s
            .max_skeleton_dist
            .map_or("none".to_string(), |d| d.to_string());
        writeln!(
            out,
            "radius={} vol_ratio={} bdy_ratio={} max_skeleton_dist={} c1={} thin={} thin_bound={} empty_top={}",
            s.radius, s.vol_ratio, s.bdy_ratio, dist, s.c1, s.thin, s.thin_bound, s.empty_top
        )
        .unwrap();
        let found = !(s.bdy_ratio_holds() && s.distance_holds());
        return Ok(Run { out, found });
    }
    Ok(Run::ok(out))
}

fn props_cmd(a: PropsArgs) -> Result<Run, Error> {
    let pattern = load_pattern(&a.pattern)?;
    let center = center_of(&a.center, pattern.dim)?;
    let mut reports = props::run_all(&pattern, &center, a.window)?;
    if !a.all {
        for p in &a.property {
            if !reports.iter().any(|r| r.property == p) {
                return Err(Error::Invalid(format!("unknown property `{p}`")));
            }
        }
        reports.retain(|r| a.property.iter().any(|p| p == r.property));
    }
    let mut out = String::new();
    for r in &reports {
        writeln!(out, "{r}").unwrap();
    }
    Ok(Run {
        out,
        found: reports.iter().any(|r| r.violated()),
    })
}

fn render_cmd(a: RenderArgs) -> Result<Run, Error> {
    let pattern = load_pattern(&a.pattern)?;
    let w = a.window.resolve(pattern.dim)?;
    let current = if a.current {
        let f = VertexFunction::indicator(&VertexSet::from_pattern(&w, &pattern));
        find_minimal_current(&f, &w)?
    } else {
        None
    };
    let mut out = String::new();
    if a.current && current.is_none() {
        out.push_str("no minimal current on this window\n");
    }
    match &a.svg {
        Some(p) => {
            fs::write(p, render::svg(&pattern, &w, current.as_ref())?)?;
            writeln!(out, "wrote {}", p.display()).unwrap();
        }
        None => out.push_str(&render::ascii(&pattern, &w)?),
    }
    Ok(Run {
        out,
        found: a.current && current.is_none(),
    })
}

fn enumerate_cmd(a: EnumerateArgs) -> Result<Run, Error> {
    let e = enumerate_candidates(a.radius, a.budget)?;
    let mut out = String::new();
    writeln!(
        out,
        "radius={} traces={} candidates={} partial={}",
        e.radius,
        e.traces,
        e.candidates.len(),
        e.partial
    )
    .unwrap();
    let forms: Vec<String> = local_boundary_forms(&e)
        .iter()
        .map(|f| format!("{f:?}"))
        .collect();
    writeln!(out, "local_forms={}", forms.join(",")).unwrap();
    let (mut long_geodesic, mut non_square) = (0, 0);
    for k in &e.candidates {
        let b = classify_window_set(k);
        if b.longest_isolated_geodesic >= 3 {
            long_geodesic += 1;
        }
        if !b.all_loops_unit_squares() {
            non_square += 1;
        }
    }
    writeln!(
        out,
        "isolated_geodesic_ge3={long_geodesic} non_square_loops={non_square}"
    )
    .unwrap();
    if let Some(p) = &a.out {
        let mut blocks = String::new();
        for k in &e.candidates {
            blocks.push_str(&Grid2::from_set(k)?.render());
            blocks.push('\n');
        }
        fs::write(p, blocks)?;
    }
    Ok(Run::ok(out))
}

fn run(cli: Cli) -> Result<Run, Error> {
    match cli.command {
        Command::Solve(a) => solve(a),
        Command::Certify(a) => certify(a),
        Command::Energy(a) => energy(a, false),
        Command::Coarea(a) => energy(a, true),
        Command::Catalog(c) => catalog(c),
        Command::Skeleton(a) => skeleton_cmd(a),
        Command::Props(a) => props_cmd(a),
        Command::Render(a) => render_cmd(a),
        Command::Enumerate(a) => enumerate_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("LATMIN_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
    {
        // ignore failure: a pool may already exist in embedding contexts
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
    match run(cli) {
        Ok(r) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(r.out.as_bytes());
            ExitCode::from(u8::from(r.found))
        }
        Err(e) => {
            eprintln!("latmin: {e}");
            ExitCode::from(2)
        }
    }
}
