//! Command-line frontend.
//!
//! Exit codes: 0 on success, 1 on bad flags or parameters (usage is
//! printed), 2 on I/O or image format errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::attributes::{attribute, AttributeKind};
use crate::error::Error;
use crate::image::{top_hat, Connectivity, Image, RgbImage, TopHat};
use crate::pnm::{read_pnm, write_pnm, write_ppm};
use crate::shape_space::{
    base_tree, detect_objects_with_tree, run_pipeline, FilterSpec, Mode, SecondAttribute, Strategy,
};
use crate::tree::TreeKind;

#[derive(Debug, Parser)]
#[command(
    name = "shapespace",
    about = "Connected filtering in the shape space of component trees"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Filter an image through the shape space of one of its trees.
    Filter(FilterArgs),
    /// Detect objects as significant attribute minima over the tree of shapes.
    Detect(DetectArgs),
    /// Print node count, leaf count and depth of a tree.
    TreeStats(StatsArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StrategyName {
    Threshold,
    Closing,
    Extinction,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum TopHatKind {
    /// |f - g|
    Abs,
    /// f - g, clipped at 0
    InputMinusFiltered,
    /// g - f, clipped at 0
    FilteredMinusInput,
}

#[derive(Debug, clap::Args)]
struct FilterArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
    #[arg(long, default_value = "min")]
    tree: TreeKind,
    #[arg(long, default_value = "4")]
    conn: Connectivity,
    #[arg(long)]
    attr: AttributeKind,
    #[arg(long, value_enum, default_value = "threshold")]
    strategy: StrategyName,
    /// Raw attribute-domain parameter (lambda or epsilon).
    #[arg(long, allow_hyphen_values = true)]
    param: Option<f64>,
    /// Second-level attribute for the closing strategy.
    #[arg(long, default_value = "height")]
    aa: SecondAttribute,
    #[arg(long, default_value = "preserve")]
    mode: Mode,
    /// Also write the top-hat residue.
    #[arg(long)]
    tophat: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "abs")]
    tophat_kind: TopHatKind,
    /// Print the min and max attribute values.
    #[arg(long)]
    list_range: bool,
}

#[derive(Debug, clap::Args)]
struct DetectArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    /// Comma-separated attribute list.
    #[arg(long, value_delimiter = ',', required = true)]
    attr: Vec<AttributeKind>,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    json: PathBuf,
    #[arg(long)]
    overlay: Option<PathBuf>,
}

#[derive(Debug, clap::Args)]
struct StatsArgs {
    #[arg(short = 'i', long = "input")]
    input: PathBuf,
    #[arg(long, default_value = "min")]
    tree: TreeKind,
    #[arg(long, default_value = "4")]
    conn: Connectivity,
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter(_) | Error::UnknownAttribute(_) => {
                Failure::Usage(e.to_string())
            }
            other => Failure::Io(other.to_string()),
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let rendered = e.render().to_string();
            eprint!("{rendered}");
            if !rendered.contains("Usage:") {
                eprintln!("\n{}", Cli::command().render_usage());
            }
            return 1;
        }
    };
    let outcome = match cli.command {
        Command::Filter(a) => filter(a),
        Command::Detect(a) => detect(a),
        Command::TreeStats(a) => tree_stats(a),
    };
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\n{}", Cli::command().render_usage());
            1
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

/// Reads a gray image; also reports whether it was stored as ASCII.
fn load(path: &Path) -> Result<(Image, bool), Failure> {
    let bytes = fs::read(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let img = read_pnm(&bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok((img, bytes.starts_with(b"P2")))
}

fn save(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    fs::write(path, bytes).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn filter(a: FilterArgs) -> Result<(), Failure> {
    let (f, ascii) = load(&a.input)?;
    if a.list_range {
        let t = base_tree(&f, a.tree, a.conn)?;
        let (lo, hi) = attribute(&t, a.attr)?.range();
        println!("min {lo}");
        println!("max {hi}");
        if a.output.is_none() {
            return Ok(());
        }
    }
    let output = a
        .output
        .ok_or_else(|| Failure::Usage("filter needs -o <output>".into()))?;
    let param = a
        .param
        .ok_or_else(|| Failure::Usage("filter needs --param <real>".into()))?;
    let strategy = match a.strategy {
        StrategyName::Threshold => Strategy::Threshold(param),
        StrategyName::Closing => Strategy::Closing {
            attribute: a.aa,
            lambda: param,
        },
        StrategyName::Extinction => Strategy::Extinction(param),
    };
    let spec = FilterSpec::new(a.tree, a.attr, strategy)
        .connectivity(a.conn)
        .mode(a.mode);
    let g = run_pipeline(&f, &spec)?.output;
    save(&output, &write_pnm(&g, ascii))?;
    if let Some(path) = a.tophat {
        let kind = match a.tophat_kind {
            TopHatKind::Abs => TopHat::Absolute,
            TopHatKind::InputMinusFiltered => TopHat::InputMinusFiltered,
            TopHatKind::FilteredMinusInput => TopHat::FilteredMinusInput,
        };
        save(&path, &write_pnm(&top_hat(&f, &g, kind)?, ascii))?;
    }
    Ok(())
}

#[derive(Serialize)]
#[serde(untagged)]
enum Extinction {
    Finite(f64),
    Text(&'static str),
}

#[derive(Serialize)]
struct DetectionRecord {
    id: usize,
    level: i64,
    area: usize,
    centroid: [f64; 2],
    attribute: f64,
    extinction: Extinction,
    attr: &'static str,
}

const PALETTE: [[u8; 3]; 6] = [
    [255, 0, 0],
    [0, 255, 0],
    [0, 0, 255],
    [255, 255, 0],
    [255, 0, 255],
    [0, 255, 255],
];

fn detect(a: DetectArgs) -> Result<(), Failure> {
    let (f, _) = load(&a.input)?;
    let (tree, mut found) = detect_objects_with_tree(&f, &a.attr, a.eps)?;
    let attr_index = |k: AttributeKind| a.attr.iter().position(|&x| x == k).unwrap_or(0);
    found.sort_by(|x, y| {
        y.extinction
            .total_cmp(&x.extinction)
            .then(x.node.cmp(&y.node))
            .then(attr_index(x.kind).cmp(&attr_index(y.kind)))
    });

    let mut out = Vec::new();
    for d in &found {
        let rec = DetectionRecord {
            id: d.node,
            level: d.level.round() as i64,
            area: d.area,
            centroid: [d.centroid.0, d.centroid.1],
            attribute: d.attribute,
            extinction: if d.extinction.is_infinite() {
                Extinction::Text("inf")
            } else {
                Extinction::Finite(d.extinction)
            },
            attr: d.kind.name(),
        };
        serde_json::to_writer(&mut out, &rec).expect("serializing to memory");
        out.write_all(b"\n").expect("writing to memory");
    }
    save(&a.json, &out)?;

    if let Some(path) = a.overlay {
        let mut rgb = RgbImage::from_gray(&f);
        let (w, h) = (f.width(), f.height());
        for d in &found {
            let mut inside = vec![false; f.len()];
            for p in tree.vertices_of(d.node) {
                inside[p] = true;
            }
            let color = PALETTE[attr_index(d.kind) % PALETTE.len()];
            for p in (0..f.len()).filter(|&p| inside[p]) {
                let (x, y) = (p % w, p / w);
                let edge = x == 0
                    || y == 0
                    || x + 1 == w
                    || y + 1 == h
                    || !inside[p - 1]
                    || !inside[p + 1]
                    || !inside[p - w]
                    || !inside[p + w];
                if edge {
                    rgb.pixels[p] = color;
                }
            }
        }
        save(&path, &write_ppm(&rgb))?;
    }
    Ok(())
}

fn tree_stats(a: StatsArgs) -> Result<(), Failure> {
    let (f, _) = load(&a.input)?;
    let t = base_tree(&f, a.tree, a.conn)?;
    println!("nodes {}", t.len());
    println!("leaves {}", t.leaf_count());
    println!("depth {}", t.depth());
    Ok(())
}
