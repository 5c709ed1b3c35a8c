use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use quivrep::arknit::{self, TranslationQuiver};
use quivrep::euclid::{self, SeriesSpec, Side};
use quivrep::exactlin::{format_scalar, Mat};
use quivrep::pathdit::{self, Ditalgebra};
use quivrep::quiver::{self, Biquiver};
use quivrep::repcat::{self, Representation};
use quivrep::rootlat::{self, ReducedFormData};
use quivrep::{Error, Result};

#[derive(Parser)]
#[command(name = "quivrep", version, about = "Exact quiver representation computations")]
struct Cli {
    /// Write the output to this file instead of stdout. Relative paths are taken inside
    /// $QUIVREP_OUT_DIR when it is set.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// A quiver given as a JSON file or as a named diagram (`A4`, `A4:rlr`, `D5`, `E6`, `K2`).
#[derive(Args)]
struct QuiverIn {
    file: Option<PathBuf>,
    #[arg(long)]
    diagram: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    X,
    Y,
}

#[derive(Subcommand)]
enum Cmd {
    /// Cartan and incidence matrices, with the check M^t C = I.
    Cartan(QuiverIn),
    /// Coxeter matrix by −CᵗC⁻¹ and by the product of reflections.
    Coxeter(QuiverIn),
    /// Positive roots of a Dynkin quiver.
    Roots(QuiverIn),
    /// Maximal root, star type and exceptional vertices of a Dynkin quiver.
    MaxRoot(QuiverIn),
    /// Generator of the radical of an extended Dynkin quiver.
    Radical(QuiverIn),
    /// Auslander–Reiten quiver of a Dynkin quiver.
    Knit {
        #[command(flatten)]
        q: QuiverIn,
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Wings of the maximal-root vertex.
    Wings(QuiverIn),
    /// Boundary sets of the maximal-root vertex.
    Boundary(QuiverIn),
    /// Hom and Ext between two representations over a quiver or ditalgebra.
    Homext { algebra: PathBuf, m: PathBuf, n: PathBuf },
    /// Whether a representation is exceptional.
    Exceptional { algebra: PathBuf, m: PathBuf },
    /// Coefficient quiver of a representation, in DOT.
    CoeffQuiver { algebra: PathBuf, m: PathBuf },
    /// Basis in which the coefficient quiver of a representation is a tree.
    TreeBasis { algebra: PathBuf, m: PathBuf },
    /// Edge reduction of a solid arrow with zero differential.
    ReduceEdge {
        algebra: PathBuf,
        #[arg(long)]
        arrow: String,
    },
    /// Regularization of a solid arrow whose differential is a single dotted arrow.
    Regularize {
        algebra: PathBuf,
        #[arg(long)]
        arrow: String,
    },
    /// Exceptional representation with a given root as dimension vector.
    RealizeRoot {
        #[command(flatten)]
        q: QuiverIn,
        /// Comma-separated entries, in vertex order.
        #[arg(long)]
        root: String,
    },
    /// One-point extension data of a Dynkin quiver.
    Extend(QuiverIn),
    /// Build a module of one of the families.
    Series(SeriesArgs),
    /// Reduced ditalgebra attached to the wings of the maximal root.
    ReducedDit {
        #[command(flatten)]
        q: QuiverIn,
        #[arg(long, value_enum, default_value = "y")]
        side: SideArg,
    },
    /// Roots of the reduced form grouped by family.
    RankFamilies {
        #[command(flatten)]
        q: QuiverIn,
        #[arg(long)]
        rank: i64,
        /// Largest entry at the branch vertices.
        #[arg(long, default_value_t = 3)]
        bound: i64,
    },
    /// Period and multiplicity of the rank function on the posprojective component.
    Period(QuiverIn),
}

#[derive(Args)]
struct SeriesArgs {
    /// Full spec as JSON text or a path to a JSON file.
    #[arg(long)]
    spec: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[arg(long, alias = "t")]
    l: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    j: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    diagram: Option<String>,
    /// Print the reduced module over the Y-side ditalgebra instead of expanding it.
    #[arg(long)]
    reduced: bool,
    /// Check exceptionality; exit 2 if the check fails.
    #[arg(long)]
    verify: bool,
}

fn read_json(path: &Path) -> Result<Value> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Schema(format!("{}: cannot read: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| {
        Error::Schema(format!("{}: line {} column {}: {e}", path.display(), e.line(), e.column()))
    })
}

fn load_quiver(q: &QuiverIn) -> Result<Biquiver> {
    match (&q.file, &q.diagram) {
        (Some(f), None) => Biquiver::from_json(&read_json(f)?).map_err(|e| prefix(f, e)),
        (None, Some(d)) => euclid::parse_diagram(d),
        _ => Err(Error::Schema("give either a quiver file or --diagram".into())),
    }
}

fn prefix(path: &Path, e: Error) -> Error {
    match e {
        Error::Schema(m) => Error::Schema(format!("{}: {m}", path.display())),
        other => other,
    }
}

/// A ditalgebra file; a plain quiver file gives the zero differential.
fn load_algebra(path: &Path) -> Result<Ditalgebra> {
    Ditalgebra::from_json(&read_json(path)?).map_err(|e| prefix(path, e))
}

fn load_rep(q: &Biquiver, path: &Path) -> Result<Representation> {
    let r = Representation::from_json(q, &read_json(path)?).map_err(|e| prefix(path, e))?;
    r.validate(q).map_err(|e| prefix(path, e))?;
    Ok(r)
}

fn mat_json(m: &Mat) -> Value {
    serde_json::to_value(m).expect("matrix serializes")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

fn vertex_json(g: &TranslationQuiver, x: usize) -> Value {
    let v = &g.vertices[x];
    json!({"label": g.label(x), "orbit": g.base.vertices[v.orbit], "k": v.k, "dim": v.dim})
}

fn run(cli: &Cli) -> Result<String> {
    Ok(match &cli.cmd {
        Cmd::Cartan(qi) => {
            let q = load_quiver(qi)?;
            let c = quiver::graded_cartan(&q)?;
            let m = quiver::incidence_matrix(&q);
            let ok = m.transpose().mul(&c) == Mat::identity(q.n());
            pretty(&json!({
                "vertices": q.vertices,
                "cartan": mat_json(&c),
                "incidence": mat_json(&m),
                "identity_check": if ok { "OK" } else { "FAILED" },
            }))
        }
        Cmd::Coxeter(qi) => {
            let q = load_quiver(qi)?;
            let a = quiver::coxeter(&q)?;
            let b = quiver::coxeter_via_reflections(&q)?;
            let mut s = String::new();
            s.push_str(&format!("vertices: {}\n", q.vertices.join(" ")));
            for r in 0..a.rows() {
                let row: Vec<String> = a.row(r).iter().map(format_scalar).collect();
                s.push_str(&format!("[{}]\n", row.join(", ")));
            }
            s.push_str(if a == b { "factorization: OK" } else { "factorization: MISMATCH" });
            if a != b {
                return Err(Error::Math(format!("{s}\n−CᵗC⁻¹ differs from the product of reflections")));
            }
            s
        }
        Cmd::Roots(qi) => {
            let d = rootlat::dynkin_data(&load_quiver(qi)?)?;
            pretty(&json!({"class": d.class.to_string(), "roots": d.positive_roots()?}))
        }
        Cmd::MaxRoot(qi) => {
            let d = rootlat::dynkin_data(&load_quiver(qi)?)?;
            let exc: Vec<Value> = d
                .exceptional_vertices()
                .into_iter()
                .map(|(v, w)| json!({"vertex": d.quiver.vertices[v], "weight": w}))
                .collect();
            pretty(&json!({
                "class": d.class.to_string(),
                "max_root": d.max_root,
                "star_type": d.star_type,
                "exceptional": exc,
            }))
        }
        Cmd::Radical(qi) => {
            let mut q = load_quiver(qi)?;
            // A Dynkin quiver stands for its one-point extension.
            if rootlat::dynkin_data(&q).is_ok() {
                q = euclid::extend(&q)?.quiver;
            }
            pretty(&json!({"vertices": q.vertices, "radical": rootlat::radical_generator(&q)?}))
        }
        Cmd::Knit { q, dot, json } => {
            let g = arknit::knit(&load_quiver(q)?)?;
            match (dot, json) {
                (true, false) => g.to_dot(),
                (false, _) => pretty(&g.to_json()),
                (true, true) => return Err(Error::Schema("choose one of --dot and --json".into())),
            }
        }
        Cmd::Wings(qi) => {
            let g = arknit::knit(&load_quiver(qi)?)?;
            let w = arknit::max_root_vertex(&g)?;
            let wings: Vec<Value> = arknit::wing_data(&g, w)?
                .iter()
                .map(|wg| {
                    let cells: Vec<Value> = (1..=wg.order)
                        .flat_map(|i| (i..=wg.order).map(move |j| (i, j)))
                        .map(|(i, j)| json!({"i": i, "j": j, "dim": g.vertices[wg.at(i, j)].dim}))
                        .collect();
                    json!({"order": wg.order, "cells": cells})
                })
                .collect();
            pretty(&json!({"w0": vertex_json(&g, w), "wings": wings}))
        }
        Cmd::Boundary(qi) => {
            let g = arknit::knit(&load_quiver(qi)?)?;
            let w = arknit::max_root_vertex(&g)?;
            let b = arknit::boundary_sets(&g, w);
            let set = |s: &std::collections::BTreeSet<usize>| -> Vec<Value> {
                s.iter().map(|&x| vertex_json(&g, x)).collect()
            };
            pretty(&json!({
                "w0": vertex_json(&g, w),
                "conl": set(&b.conl),
                "conr": set(&b.conr),
                "conl0": set(&b.conl0),
                "conr0": set(&b.conr0),
            }))
        }
        Cmd::Homext { algebra, m, n } => {
            let d = load_algebra(algebra)?;
            let (mr, nr) = (load_rep(&d.quiver, m)?, load_rep(&d.quiver, n)?);
            let (hom, ext) = repcat::sigma_dims(&d, &mr, &nr)?;
            let euler = quiver::FormData::new(&d.quiver).euler(&mr.dim_vector(), &nr.dim_vector())?;
            pretty(&json!({"hom": hom, "ext": ext, "euler": euler, "euler_check": hom as i64 - ext as i64 == euler}))
        }
        Cmd::Exceptional { algebra, m } => {
            let d = load_algebra(algebra)?;
            let mr = load_rep(&d.quiver, m)?;
            let (hom, ext) = repcat::sigma_dims(&d, &mr, &mr)?;
            format!("end: {hom}\next: {ext}\nexceptional: {}", if hom == 1 && ext == 0 { "yes" } else { "no" })
        }
        Cmd::CoeffQuiver { algebra, m } => {
            let d = load_algebra(algebra)?;
            let mr = load_rep(&d.quiver, m)?;
            repcat::coefficient_quiver(&d.quiver, &mr).to_dot(&d.quiver)
        }
        Cmd::TreeBasis { algebra, m } => {
            let d = load_algebra(algebra)?;
            let mr = load_rep(&d.quiver, m)?;
            let tb = repcat::tree_basis(&d, &mr)?;
            let changed = mr.change_basis(&d.quiver, &tb.basis)?;
            let basis: serde_json::Map<String, Value> =
                d.quiver.vertices.iter().zip(&tb.basis).map(|(l, b)| (l.clone(), mat_json(b))).collect();
            pretty(&json!({
                "basis": basis,
                "module": changed.to_json(&d.quiver),
                "tree": tb.quiver.is_tree(),
            }))
        }
        Cmd::ReduceEdge { algebra, arrow } => {
            let d = load_algebra(algebra)?;
            let a = d.quiver.arrow(arrow).ok_or_else(|| Error::Schema(format!("unknown arrow {arrow:?}")))?;
            let (red, info) = pathdit::reduce_edge(&d, a)?;
            pretty(&json!({
                "ditalgebra": red.to_json(),
                "new_vertex": red.quiver.vertices[info.z],
                "mu": info.mu,
                "nu": info.nu,
            }))
        }
        Cmd::Regularize { algebra, arrow } => {
            let d = load_algebra(algebra)?;
            let a = d.quiver.arrow(arrow).ok_or_else(|| Error::Schema(format!("unknown arrow {arrow:?}")))?;
            pretty(&pathdit::regularize(&d, a)?.to_json())
        }
        Cmd::RealizeRoot { q, root } => {
            let q = load_quiver(q)?;
            let r: Vec<i64> = root
                .split(',')
                .map(|x| x.trim().parse().map_err(|_| Error::Schema(format!("--root: {x:?} is not an integer"))))
                .collect::<Result<_>>()?;
            if r.len() != q.n() {
                return Err(Error::Schema(format!("--root has {} entries for {} vertices", r.len(), q.n())));
            }
            pretty(&repcat::realize_root(&q, &r)?.to_json(&q))
        }
        Cmd::Extend(qi) => {
            let e = euclid::extend(&load_quiver(qi)?)?;
            let v = |x: &[quivrep::exactlin::Scalar]| -> Vec<String> { x.iter().map(format_scalar).collect() };
            let branches: Vec<Value> = e
                .branches
                .iter()
                .map(|b| {
                    json!({
                        "order": b.order,
                        "x_dims": b.x.iter().map(|m| m.dim_vector()).collect::<Vec<_>>(),
                        "y_dims": b.y.iter().map(|m| m.dim_vector()).collect::<Vec<_>>(),
                        "rho": v(b.rho()),
                        "alpha": [b.alpha.0, b.alpha.1],
                        "beta": [b.beta.0, b.beta.1],
                        "case": b.case(),
                    })
                })
                .collect();
            let slots: Vec<Value> = e
                .slots
                .iter()
                .map(|s| json!({"vertex": e.delta.vertices[s.vertex], "arrow": e.quiver.arrows[s.arrow].id}))
                .collect();
            pretty(&json!({
                "quiver": e.quiver.to_json(),
                "slots": slots,
                "w0": e.w0,
                "radical": e.radical(),
                "w0_module": e.w0_module.to_json(&e.delta),
                "a": v(&e.a), "a'": v(&e.a_prime), "b": v(&e.b), "b'": v(&e.b_prime),
                "branches": branches,
            }))
        }
        Cmd::Series(sa) => series(sa)?,
        Cmd::ReducedDit { q, side } => {
            let e = euclid::extend(&load_quiver(q)?)?;
            let side = match side {
                SideArg::X => Side::X,
                SideArg::Y => Side::Y,
            };
            let d = euclid::reduced_ditalgebra(&e, side)?;
            let d2 = pathdit::check_d_squared(&d);
            let tri = pathdit::check_triangular(&d);
            let mut v = d.to_json();
            v["d_squared"] = json!(match &d2 {
                Ok(()) => "OK".to_string(),
                Err(f) => format!("fails on {}: {}", f.arrow, f.residue),
            });
            v["triangular"] = json!(if tri.is_ok() { "OK" } else { "FAILED" });
            pretty(&v)
        }
        Cmd::RankFamilies { q, rank, bound } => {
            let d = rootlat::dynkin_data(&load_quiver(q)?)?;
            let rf = ReducedFormData::from_star_type(&d.star_type);
            let fams = rootlat::enumerate_rank_families(&rf, *rank, *bound)?;
            let listed: Vec<&str> = rootlat::minor_rank_families(&rf, *rank);
            pretty(&json!({
                "shape": rf.branches,
                "rank": rank,
                "families": fams,
                "minor_table": listed,
            }))
        }
        Cmd::Period(qi) => {
            let e = euclid::extend(&load_quiver(qi)?)?;
            let (p, m) = rootlat::period_multiplicity(&e)?;
            pretty(&json!({"period": p, "multiplicity": m}))
        }
    })
}

fn series(sa: &SeriesArgs) -> Result<String> {
    let spec: SeriesSpec = match &sa.spec {
        Some(s) => {
            let v: Value = if s.trim_start().starts_with('{') {
                serde_json::from_str(s)
                    .map_err(|e| Error::Schema(format!("--spec: line {} column {}: {e}", e.line(), e.column())))?
            } else {
                read_json(Path::new(s))?
            };
            serde_json::from_value(v).map_err(|e| Error::Schema(format!("series spec: {e}")))?
        }
        None => SeriesSpec {
            family: sa.family.clone().ok_or_else(|| Error::Schema("give --spec or --family".into()))?,
            l: sa.l.ok_or_else(|| Error::Schema("--l (or --t) is required".into()))?,
            i: sa.i,
            j: sa.j,
            k: sa.k,
            side: None,
            diagram: sa.diagram.clone(),
            markers: None,
        },
    };
    let out = if sa.reduced { euclid::build_reduced(&spec)? } else { euclid::build_series(&spec)? };
    let mut v = out.to_json();
    let mut text = String::new();
    if sa.verify {
        let ok = out.verify()?;
        v["exceptional"] = json!(ok);
        text = format!("dims: {}\nexceptional: {}\n", v["dims"], if ok { "yes" } else { "no" });
        if !ok {
            return Err(Error::Math(format!("{text}the constructed module is not exceptional")));
        }
    }
    text.push_str(&pretty(&v));
    Ok(text)
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = writeln!(out, "{text}");
            Ok(())
        }
        Some(p) => {
            let path = match std::env::var_os("QUIVREP_OUT_DIR") {
                Some(dir) if p.is_relative() => Path::new(&dir).join(p),
                _ => p.clone(),
            };
            std::fs::write(&path, format!("{text}\n"))
                .map_err(|e| Error::Schema(format!("{}: cannot write: {e}", path.display())))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli).and_then(|text| emit(&cli.out, &text)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
