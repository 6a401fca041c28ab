//! Command-line surface. Subcommands: solve (P-positions as CSV), diff
//! (difference image plus mismatch counts), offset (two independent offset
//! computations, checked against each other), evolve (string evolution
//! listing), area (area/defect report), similarity (ratio sweep over radii),
//! and verify (the built-in invariant suite).
//!
//! Exit codes: 0 success, 1 assertion failure, 2 usage or config error.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{parse_config, Extent, JobConfig};
use crate::game::{offset_set, Alteration, Point, Position, RuleSet};
use crate::offsets::{altered_p_points, general_offset, similarity_ratio, unique_offset};
use crate::oracle::{oracle_labels, wythoff_beams};
use crate::render::{render_diff, render_grid};
use crate::solver::solve;
use crate::strings::{
    area_between, defects, differ_by_defects, is_balanced, w_morphism, wythoff_update, BitString,
};

/// Safety cap for open-ended runs (saturation search, offset alignment),
/// overridable through NIMHOFF_CAP.
fn safety_cap() -> i64 {
    std::env::var("NIMHOFF_CAP")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(200_000)
}

#[derive(Parser)]
#[command(
    name = "nimhoff",
    version,
    about = "P-position analysis for altered Wythoff and Linear Nimhoff games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum Engine {
    /// Column engine for Wythoff rules with a column extent, dense labeling
    /// over a box otherwise.
    Auto,
    /// Dense retrograde labeling over a box.
    Oracle,
    /// Incremental column engine (Wythoff rules only).
    Solver,
}

#[derive(Args)]
struct ExtentFlags {
    /// Compute columns 0..=TMAX (column engine form).
    #[arg(long)]
    tmax: Option<i64>,
    /// Grid width (box form; needs --height).
    #[arg(long)]
    width: Option<i64>,
    /// Grid height (box form; needs --width).
    #[arg(long)]
    height: Option<i64>,
}

#[derive(Subcommand)]
enum Command {
    /// Compute P-positions and emit them as CSV lines "x,y", sorted.
    Solve {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        extent: ExtentFlags,
        #[arg(long, value_enum, default_value_t = Engine::Auto)]
        engine: Engine,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Also render the labeled grid to this image (.ppm or .svg).
        #[arg(long)]
        image: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        zoom: u32,
    },
    /// Compare the P-positions of two configurations over one box.
    Diff {
        #[arg(long)]
        config_a: PathBuf,
        #[arg(long)]
        config_b: PathBuf,
        #[arg(long)]
        width: Option<i64>,
        #[arg(long)]
        height: Option<i64>,
        /// Difference image path (.ppm or .svg); defaults to the first
        /// configuration's `out` entry.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        zoom: u32,
    },
    /// Compute the translation offset by both constructions and check that
    /// they agree.
    Offset {
        #[arg(long)]
        config: PathBuf,
    },
    /// Repeatedly rewrite a bitstring, printing one line per step.
    Evolve {
        /// Starting string over {0,1}.
        #[arg(long)]
        start: String,
        #[arg(long)]
        steps: u32,
        /// Apply the substitution morphism (0→001, 1→01) instead of single
        /// updates.
        #[arg(long)]
        morphism: bool,
    },
    /// Area and defect report for two bitstrings.
    Area {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Similarity-ratio sweep between a translated altered game and the
    /// unaltered game.
    Similarity {
        #[arg(long)]
        config: PathBuf,
        /// Radii to sweep (defaults to the configuration's `radii`).
        #[arg(long = "radius")]
        radii: Vec<i64>,
    },
    /// Run the built-in invariant suite.
    Verify,
}

enum Failure {
    Usage(String),
    Assertion(String),
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Self {
        Failure::Usage(msg.into())
    }
}

impl From<crate::render::RenderError> for Failure {
    fn from(e: crate::render::RenderError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Parses `argv` and runs the selected command, returning the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.command {
        Command::Solve {
            config,
            extent,
            engine,
            csv,
            image,
            zoom,
        } => cmd_solve(
            &config,
            &extent,
            engine,
            csv.as_deref(),
            image.as_deref(),
            zoom,
        ),
        Command::Diff {
            config_a,
            config_b,
            width,
            height,
            out,
            zoom,
        } => cmd_diff(&config_a, &config_b, width, height, out.as_deref(), zoom),
        Command::Offset { config } => cmd_offset(&config),
        Command::Evolve {
            start,
            steps,
            morphism,
        } => cmd_evolve(&start, steps, morphism),
        Command::Area { first, second } => cmd_area(&first, &second),
        Command::Similarity { config, radii } => cmd_similarity(&config, &radii),
        Command::Verify => cmd_verify(),
    };
    match result {
        Ok(()) => 0,
        Err(Failure::Assertion(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn load_config(path: &Path) -> Result<JobConfig, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

/// Box extent from flags or config, if any.
fn resolve_box(
    flags_w: Option<i64>,
    flags_h: Option<i64>,
    config: &JobConfig,
) -> Option<(i64, i64)> {
    match (flags_w, flags_h) {
        (Some(w), Some(h)) => Some((w, h)),
        _ => match config.extent {
            Some(Extent::Box(w, h)) => Some((w, h)),
            _ => None,
        },
    }
}

fn wythoff_height_bound(alteration: &Alteration, t_max: i64) -> i64 {
    alteration.m_y() + 2 * t_max + 1
}

/// P-positions of a configuration over the box [0,w) × [0,h), using the
/// dense oracle (valid for any rule set).
fn p_points_in_box(config: &JobConfig, w: i64, h: i64) -> BTreeSet<Point> {
    oracle_labels(&config.ruleset(), &config.alteration(), w, h)
        .p_positions()
        .map(Position::point)
        .collect()
}

fn cmd_solve(
    config_path: &Path,
    extent: &ExtentFlags,
    engine: Engine,
    csv: Option<&Path>,
    image: Option<&Path>,
    zoom: u32,
) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    let ruleset = config.ruleset();
    let alteration = config.alteration();

    if extent.width.is_some() != extent.height.is_some() {
        return Err(Failure::usage(
            "--width and --height must be given together",
        ));
    }
    // flags beat the config's extent
    let effective = match (extent.width, extent.height, extent.tmax) {
        (Some(w), Some(h), _) => Some(Extent::Box(w, h)),
        (_, _, Some(t)) => Some(Extent::Columns(t)),
        _ => config.extent,
    };

    enum Plan {
        Columns(i64),
        Box(i64, i64),
    }
    let plan = match (engine, effective) {
        (_, None) => return Err(Failure::usage("no extent given (--tmax, --width/--height, or a config extent)")),
        (Engine::Solver | Engine::Auto, Some(Extent::Columns(t))) if ruleset.is_wythoff() => {
            Plan::Columns(t)
        }
        (Engine::Solver, _) => {
            return Err(Failure::usage(
                "the column engine needs the Wythoff rule set and a column extent; use --engine oracle with --width/--height",
            ))
        }
        (Engine::Oracle, Some(Extent::Columns(t))) if ruleset.is_wythoff() => {
            Plan::Box(t + 1, wythoff_height_bound(&alteration, t))
        }
        (Engine::Oracle | Engine::Auto, Some(Extent::Columns(_))) => {
            return Err(Failure::usage(
                "a column extent bounds heights only under Wythoff rules; give --width/--height",
            ))
        }
        (_, Some(Extent::Box(w, h))) => Plan::Box(w, h),
    };

    let p_set: BTreeSet<Position> = match plan {
        Plan::Columns(t) => {
            if t < 0 {
                return Err(Failure::usage("tmax must be non-negative"));
            }
            solve(&alteration, t)
                .map_err(|e| Failure::Assertion(e.to_string()))?
                .0
        }
        Plan::Box(w, h) => {
            if w < 1 || h < 1 {
                return Err(Failure::usage("the extent box must be at least 1x1"));
            }
            oracle_labels(&ruleset, &alteration, w, h)
                .p_positions()
                .collect()
        }
    };

    let mut csv_text = String::new();
    for p in &p_set {
        csv_text.push_str(&format!("{},{}\n", p.x, p.y));
    }
    match csv {
        Some(path) => fs::write(path, csv_text)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(csv_text.as_bytes())?;
        }
    }

    if let Some(image_path) = image {
        let (w, h) = match plan {
            Plan::Box(w, h) => (w, h),
            Plan::Columns(t) => (t + 1, wythoff_height_bound(&alteration, t)),
        };
        let grid = oracle_labels(&ruleset, &alteration, w, h);
        render_grid(&grid, image_path, zoom)?;
    }
    Ok(())
}

fn cmd_diff(
    config_a: &Path,
    config_b: &Path,
    width: Option<i64>,
    height: Option<i64>,
    out: Option<&Path>,
    zoom: u32,
) -> Result<(), Failure> {
    let a_config = load_config(config_a)?;
    let b_config = load_config(config_b)?;
    let (w, h) = resolve_box(width, height, &a_config)
        .or_else(|| resolve_box(None, None, &b_config))
        .ok_or_else(|| Failure::usage("no box extent given (--width/--height or config extent)"))?;
    if w < 1 || h < 1 {
        return Err(Failure::usage("the extent box must be at least 1x1"));
    }

    let a = p_points_in_box(&a_config, w, h);
    let b = p_points_in_box(&b_config, w, h);
    let common = a.intersection(&b).count();
    println!("extent: {w}x{h}");
    println!("common: {common}");
    println!("a_only: {}", a.len() - common);
    println!("b_only: {}", b.len() - common);

    let out_path = out.map(Path::to_path_buf).or_else(|| a_config.out.clone());
    if let Some(path) = out_path {
        render_diff(&a, &b, (w, h), &path, zoom)?;
        println!("image: {}", path.display());
    }
    Ok(())
}

fn cmd_offset(config_path: &Path) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    if !config.ruleset().is_wythoff() {
        return Err(Failure::usage(
            "offsets are defined against the Wythoff rule set only",
        ));
    }
    let alteration = config.alteration();
    let unique =
        unique_offset(&alteration, safety_cap()).map_err(|e| Failure::Assertion(e.to_string()))?;
    let general = general_offset(&alteration).map_err(|e| Failure::Assertion(e.to_string()))?;
    print!("{unique}");
    println!();
    print!("{general}");
    let agree = (unique.dx, unique.dy) == (general.dx, general.dy);
    println!("agreement: {agree}");
    if !agree {
        return Err(Failure::Assertion(format!(
            "offset constructions disagree: unique ({}, {}) vs general ({}, {})",
            unique.dx, unique.dy, general.dx, general.dy
        )));
    }
    Ok(())
}

fn cmd_evolve(start: &str, steps: u32, morphism: bool) -> Result<(), Failure> {
    let mut s: BitString = start
        .parse()
        .map_err(|e| Failure::usage(format!("invalid start string: {e}")))?;
    if s.is_empty() {
        return Err(Failure::usage("the start string must be non-empty"));
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{s}")?;
    for _ in 0..steps {
        s = if morphism {
            w_morphism(&s)
        } else {
            wythoff_update(&s).expect("updates keep strings non-empty")
        };
        writeln!(out, "{s}")?;
    }
    Ok(())
}

fn cmd_area(first: &str, second: &str) -> Result<(), Failure> {
    let s: BitString = first
        .parse()
        .map_err(|e| Failure::usage(format!("invalid first string: {e}")))?;
    let t: BitString = second
        .parse()
        .map_err(|e| Failure::usage(format!("invalid second string: {e}")))?;
    println!("first: {s}");
    println!("second: {t}");
    println!("balanced: {}", is_balanced(&s, &t));
    if !is_balanced(&s, &t) {
        return Err(Failure::usage(
            "the strings are not balanced (same length, same number of ones), so area is undefined",
        ));
    }
    let ds = defects(&s, &t).expect("balanced");
    println!("area: {}", area_between(&s, &t).expect("balanced"));
    println!("defect_indices: {ds:?}");
    println!("defect_count: {}", ds.len());
    println!(
        "differ_by_defects: {}",
        differ_by_defects(&s, &t).expect("balanced")
    );
    Ok(())
}

fn cmd_similarity(config_path: &Path, radii_flag: &[i64]) -> Result<(), Failure> {
    let config = load_config(config_path)?;
    if !config.ruleset().is_wythoff() {
        return Err(Failure::usage(
            "similarity sweeps compare against the Wythoff rule set only",
        ));
    }
    let radii: Vec<i64> = if radii_flag.is_empty() {
        config.radii.clone()
    } else {
        radii_flag.to_vec()
    };
    if radii.is_empty() || radii.iter().any(|&r| r < 1) {
        return Err(Failure::usage("radii must be positive"));
    }
    let alteration = config.alteration();
    let report = general_offset(&alteration).map_err(|e| Failure::Assertion(e.to_string()))?;
    println!("dx: {}", report.dx);
    println!("dy: {}", report.dy);

    let max_radius = *radii.iter().max().unwrap();
    let altered = altered_p_points(&alteration, max_radius + report.dx.abs() + 8)
        .map_err(|e| Failure::Assertion(e.to_string()))?;
    let shifted = offset_set(altered.iter().copied(), report.dx, report.dy);
    let natural: BTreeSet<Point> = wythoff_beams((max_radius + 8) as u64)
        .into_iter()
        .map(Position::point)
        .collect();
    for &r in &radii {
        let ratio = similarity_ratio(&shifted, &natural, r);
        println!(
            "radius {r}: {}/{} = {:.6}",
            ratio.numer(),
            ratio.denom(),
            *ratio.numer() as f64 / (*ratio.denom() as f64)
        );
    }
    Ok(())
}

fn cmd_verify() -> Result<(), Failure> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        if ok {
            println!("ok {name}");
        } else {
            println!("FAIL {name}");
            failures += 1;
        }
    };

    check("beams match dense labeling", verify_beams());
    check(
        "dense labeling is self-consistent",
        verify_oracle_consistency(),
    );
    check(
        "column engine matches dense labeling",
        verify_solver_oracle(),
    );
    check(
        "unused diagonals fall to zero and stay",
        verify_saturation(),
    );
    check("bitstring update tracks the engine", verify_string_update());
    check(
        "morphism facts hold on small strings",
        verify_morphism_facts(),
    );
    check(
        "area and defects transport through the morphism",
        verify_area_defects(),
    );
    check(
        "convergence bound holds on small pairs",
        verify_convergence(),
    );
    check("offset constructions agree", verify_offsets());
    check("coordinate maps invert", verify_maps());

    if failures > 0 {
        return Err(Failure::Assertion(format!(
            "{failures} verification check(s) failed"
        )));
    }
    Ok(())
}

fn sample_alterations() -> Vec<Alteration> {
    let pos = Position::new;
    let blocked_corner = Alteration::new(
        [pos(0, 0)],
        (0..3)
            .flat_map(|x| (0..3).map(move |y| pos(x, y)))
            .filter(|p| *p != pos(0, 0)),
    )
    .unwrap();
    vec![
        Alteration::new([], [pos(0, 0)]).unwrap(),
        blocked_corner,
        Alteration::solid_p_box(3, 2),
        Alteration::new([pos(2, 5), pos(4, 1)], [pos(0, 0), pos(1, 3), pos(3, 3)]).unwrap(),
    ]
}

fn verify_beams() -> bool {
    let grid = oracle_labels(&RuleSet::wythoff(), &Alteration::empty(), 200, 200);
    let beams: BTreeSet<Position> = wythoff_beams(200)
        .into_iter()
        .filter(|p| p.x < 200 && p.y < 200)
        .collect();
    grid.p_positions().collect::<BTreeSet<_>>() == beams
}

fn verify_oracle_consistency() -> bool {
    use crate::game::Rule;
    use crate::oracle::labels_consistent;
    let wythoff = RuleSet::wythoff();
    let variant = RuleSet::new(vec![Rule::new(1, 0), Rule::new(0, 2), Rule::new(1, 1)]);
    sample_alterations().iter().all(|alt| {
        labels_consistent(&oracle_labels(&wythoff, alt, 50, 50))
            && labels_consistent(&oracle_labels(&variant, alt, 50, 50))
    })
}

fn verify_solver_oracle() -> bool {
    let wythoff = RuleSet::wythoff();
    sample_alterations().iter().all(|alt| {
        let t_max = 100;
        let height = wythoff_height_bound(alt, t_max);
        match solve(alt, t_max) {
            Ok((p, _)) => {
                let grid = oracle_labels(&wythoff, alt, t_max + 1, height);
                p == grid.p_positions().collect::<BTreeSet<_>>()
            }
            Err(_) => false,
        }
    })
}

fn verify_saturation() -> bool {
    sample_alterations().iter().all(|alt| {
        let mut st = crate::solver::SolverState::new(alt.clone());
        let mut history = Vec::new();
        for _ in 0..=150 {
            if st.advance_column().is_err() {
                return false;
            }
            if st.next_column() > alt.m_x() {
                history.push(st.unused_diag_count().unwrap());
            }
        }
        history.windows(2).all(|w| w[1] <= w[0]) && history.last() == Some(&0)
    })
}

fn verify_string_update() -> bool {
    sample_alterations().iter().all(|alt| {
        let mut st = crate::solver::SolverState::new(alt.clone());
        if st.run_to_saturation(10_000).is_err() {
            return false;
        }
        let mut prev = st.extract_bitstring().unwrap();
        for _ in 0..500 {
            st.advance_column().unwrap();
            let cur = st.extract_bitstring().unwrap();
            if Ok(&cur) != wythoff_update(&prev).as_ref() {
                return false;
            }
            prev = cur;
        }
        true
    })
}

fn all_strings(len: usize) -> Vec<BitString> {
    (0..(1u32 << len))
        .map(|m| BitString::from_bits((0..len).map(|i| m >> i & 1 == 1)))
        .collect()
}

fn verify_morphism_facts() -> bool {
    use crate::strings::w_preimage;
    for len in 0..=10 {
        for s in all_strings(len) {
            let w = w_morphism(&s);
            if w.len() != 3 * s.zeros() + 2 * s.ones()
                || w.zeros() != 2 * s.zeros() + s.ones()
                || w.ones() != s.len()
                || w_preimage(&w) != Some(s.clone())
            {
                return false;
            }
            if !s.is_empty() && (w.bit(1) || !w.bit(w.len())) {
                return false;
            }
            if (1..w.len()).any(|i| w.bit(i) && w.bit(i + 1)) {
                return false;
            }
            let mut via_updates = s.clone();
            for _ in 0..2 * s.zeros() + s.ones() {
                match wythoff_update(&via_updates) {
                    Ok(next) => via_updates = next,
                    Err(_) => {
                        if s.is_empty() {
                            break;
                        }
                        return false;
                    }
                }
            }
            if !s.is_empty() && via_updates != w {
                return false;
            }
        }
    }
    true
}

fn verify_area_defects() -> bool {
    use crate::strings::{f_map, units_between};
    for len in 1..=8 {
        for s in all_strings(len) {
            for t in all_strings(len) {
                if !is_balanced(&s, &t) {
                    continue;
                }
                let units = units_between(&s, &t).unwrap();
                let ws = w_morphism(&s);
                let wt = w_morphism(&t);
                let w_units = units_between(&ws, &wt).unwrap();
                let mapped: BTreeSet<_> = units
                    .iter()
                    .map(|u| {
                        let (x, y) = f_map((u.x, u.y));
                        crate::strings::AreaUnit { x, y }
                    })
                    .collect();
                if mapped != w_units {
                    return false;
                }
                if differ_by_defects(&s, &t).unwrap()
                    && defects(&s, &t).unwrap().len() != units.len()
                {
                    return false;
                }
            }
        }
    }
    true
}

fn verify_convergence() -> bool {
    for len in 1..=6 {
        for s in all_strings(len) {
            for t in all_strings(len) {
                if !is_balanced(&s, &t) {
                    continue;
                }
                let mut a = s.clone();
                let mut b = t.clone();
                let mut ok = false;
                for _ in 0..=len + 1 {
                    if differ_by_defects(&a, &b).unwrap() {
                        ok = true;
                        break;
                    }
                    a = w_morphism(&a);
                    b = w_morphism(&b);
                }
                if !ok && !differ_by_defects(&a, &b).unwrap() {
                    return false;
                }
            }
        }
    }
    true
}

fn verify_offsets() -> bool {
    use crate::offsets::box_offset;
    let cap = safety_cap();
    if !sample_alterations().iter().all(|alt| {
        match (unique_offset(alt, cap), general_offset(alt)) {
            (Ok(u), Ok(g)) => (u.dx, u.dy) == (g.dx, g.dy),
            _ => false,
        }
    }) {
        return false;
    }
    (1..=6).all(|a| {
        (1..=6).all(|b| {
            let g = general_offset(&Alteration::solid_p_box(a, b)).unwrap();
            let f = box_offset(a, b);
            (g.dx, g.dy) == (f.dx, f.dy) && (g.dx, g.dy) == (b - 1, a - 1)
        })
    })
}

fn verify_maps() -> bool {
    use crate::strings::{f_map, g_map, g_power};
    for x in -40..=40 {
        for y in -40..=40 {
            if g_map(f_map((x, y))) != (x, y) || f_map(g_map((x, y))) != (x, y) {
                return false;
            }
        }
    }
    for n in 1..=15u32 {
        for &p in &[(0i64, 0i64), (3, 1), (-7, 11), (25, -3)] {
            let mut q = p;
            for _ in 0..n {
                q = g_map(q);
            }
            if g_power(n, p) != q {
                return false;
            }
        }
    }
    true
}
