use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::{json, Value};

use cremona::algebra::parse::{parse_elem, parse_poly};
use cremona::algebra::{pgl_equal, poly_ring, Conj, Elem, Field, Mat, Scalar};
use cremona::fibration::{projective_points, Fibration};
use cremona::graph::{point_count_along, table_words, GraphMode, LinkWord, SarkisovGraph};
use cremona::jonq22::ExorcistData;
use cremona::json::{elem_to_json, field_to_json, map_to_json, mat_to_json, mat_to_strings, parse_field, poly_to_json, RunReport};
use cremona::maps::{projective_ring, quadratic_involution_from, ProjectiveMap};
use cremona::pieces::{central_symmetry, conic_square, find_piece, piece_catalog, validate_piece, PieceSummary};
use cremona::quadform::QuadraticSpace;
use cremona::reducer::{reduce_to_involutions, ReduceOptions};
use cremona::samples;

#[derive(Parser)]
#[command(name = "cremona", version, about = "Verification runs for plane Cremona maps, quadratic forms and Sarkisov link words")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Print the JSON report to standard output instead of the summary.
    #[arg(long, global = true)]
    json: bool,
    /// Write the JSON report to this path.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for every randomized sample.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Describe a field tower and verify its Galois generators.
    Field {
        /// `Q`, `F5`, `F3[i]/(i^2+1)`, or a JSON field spec.
        #[arg(long)]
        spec: String,
    },
    #[command(subcommand)]
    Qform(QformCmd),
    #[command(subcommand)]
    Map(MapCmd),
    #[command(subcommand)]
    Fib(FibCmd),
    #[command(subcommand)]
    Jonq22(JonqCmd),
    #[command(subcommand)]
    Graph(GraphCmd),
    #[command(subcommand)]
    Pieces(PiecesCmd),
    /// Rewrite a closed link word into involution tokens.
    Reduce {
        #[arg(long)]
        word: String,
        /// Base field; `f2` enables the route specific to two elements.
        #[arg(long)]
        field: Option<String>,
        #[arg(long, default_value_t = 8)]
        max_sl: usize,
    },
}

#[derive(Args)]
struct FormArgs {
    #[arg(long, default_value = "Q")]
    field: String,
    /// The quadratic form, e.g. `x^2 + y^2 + z^2`.
    #[arg(long)]
    form: String,
    /// Variable order; defaults to the sorted variables of the form.
    #[arg(long, value_delimiter = ',')]
    vars: Option<Vec<String>>,
}

#[derive(Subcommand)]
enum QformCmd {
    /// Factor isometries into reflections, or into involutions of SO with `--so`.
    Factor {
        #[command(flatten)]
        form: FormArgs,
        /// Rows separated by `;`, entries by `,`.
        #[arg(long)]
        matrix: Option<String>,
        /// Number of seeded random isometries to factor as well.
        #[arg(long, default_value_t = 0)]
        random: usize,
        #[arg(long)]
        so: bool,
        #[arg(long, default_value_t = 50)]
        height: i64,
    },
    /// Radical and defect of the form.
    Defect {
        #[command(flatten)]
        form: FormArgs,
    },
    /// Isotropy certificate of the form.
    Isotropy {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, default_value_t = 50)]
        height: i64,
    },
}

#[derive(Subcommand)]
enum MapCmd {
    /// Compose `f ∘ g`; components separated by `;`.
    Compose {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
    },
    /// Check that a map is an involution, or build a quadratic involution from frames.
    Involution {
        #[arg(long, default_value = "Q")]
        field: String,
        #[arg(long)]
        f: Option<String>,
        /// Base points of the quadratic map `f`, as `p1;p2;p3`.
        #[arg(long)]
        points: Option<String>,
        /// Points onto which `f` contracts the opposite lines.
        #[arg(long)]
        images: Option<String>,
        /// Number of random maps `B∘σ∘A⁻¹` to turn into involutions.
        #[arg(long, default_value_t = 0)]
        random_frames: usize,
    },
}

#[derive(Args)]
struct FibArgs {
    #[arg(long, default_value = "F5")]
    field: String,
    /// Centre `a,b,c` of a pencil of lines.
    #[arg(long, conflicts_with_all = ["two_two", "quartic"])]
    center: Option<String>,
    /// Monic quadratics `c0,c1;c0,c1` for a pencil of conics through two 2-points.
    #[arg(long, conflicts_with = "quartic")]
    two_two: Option<String>,
    /// Coefficients `a,b,c,d` of `t^4 + a t^3 + b t^2 + c t + d`; defaults to the first irreducible one.
    #[arg(long)]
    quartic: Option<String>,
}

#[derive(Subcommand)]
enum FibCmd {
    /// Build a fibration and certify its base points and pencil form.
    Build {
        #[command(flatten)]
        fib: FibArgs,
    },
    /// Send seeded elements of SO over k(t) to fibre-preserving Cremona maps.
    Bridge {
        #[command(flatten)]
        fib: FibArgs,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        deg: u32,
    },
    /// Factor seeded elements of SO over k(t) into fibrewise involutions.
    Factor {
        #[command(flatten)]
        fib: FibArgs,
        #[arg(long, default_value_t = 3)]
        count: usize,
        #[arg(long, default_value_t = 1)]
        deg: u32,
    },
}

#[derive(Args)]
struct JonqArgs {
    #[arg(long, default_value = "Q")]
    field: String,
    /// Minimal polynomial of θ in `x`, e.g. `x^2 + 1`.
    #[arg(long = "L")]
    l: String,
    /// Minimal polynomial of θ' in `x`.
    #[arg(long = "Lp")]
    lp: String,
}

#[derive(Subcommand)]
enum JonqCmd {
    /// Descend `(1/(μx), 1/(λy))` to a Cremona involution over k.
    Gen {
        #[command(flatten)]
        data: JonqArgs,
        /// An element of the composite field (generators `th`, `thp`); sampled when absent.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
    /// Check the chart maps and the induced Galois actions.
    Check {
        #[command(flatten)]
        data: JonqArgs,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    General,
    Real,
}

impl From<ModeArg> for GraphMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::General => GraphMode::General,
            ModeArg::Real => GraphMode::RealType,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Delpezzo,
    Fibering,
    All,
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Check that every link of a word exists in the graph.
    Validate {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
    },
    /// Classify a closed word.
    Classify {
        #[arg(long)]
        word: String,
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
    },
    /// Enumerate candidate irreducible words up to a Sarkisov length.
    Enumerate {
        #[arg(long, default_value_t = 5)]
        max_sl: usize,
        #[arg(long, value_enum, default_value_t = KindArg::All)]
        kind: KindArg,
        #[arg(long, value_enum, default_value_t = ModeArg::General)]
        mode: ModeArg,
    },
    /// Rational point counts along a word over F_q.
    Counts {
        #[arg(long)]
        word: String,
        #[arg(long)]
        q: u64,
    },
}

#[derive(Subcommand)]
enum PiecesCmd {
    /// Summaries of every catalogued piece.
    List,
    /// One piece by any of its names, e.g. `<P2,2,3>`.
    Show { name: String },
    /// Validate the catalogue against the graph and check central symmetries.
    Validate,
}

/// Malformed input; reported with exit code 2.
#[derive(Debug)]
struct Usage(String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(arg: &str, e: impl fmt::Display) -> anyhow::Error {
    Usage(format!("invalid {arg}: {e}")).into()
}

fn field_arg(arg: &str, s: &str) -> Result<Field> {
    parse_field(s).map_err(|e| usage(arg, e))
}

fn elems_arg(field: &Field, arg: &str, s: &str) -> Result<Vec<Elem>> {
    s.split(',').map(|e| parse_elem(field, e.trim()).map_err(|err| usage(arg, err))).collect()
}

fn rows_arg(field: &Field, arg: &str, s: &str) -> Result<Vec<Vec<Elem>>> {
    s.split(';').map(|r| elems_arg(field, arg, r)).collect()
}

fn matrix_arg(field: &Field, arg: &str, s: &str, n: usize) -> Result<Mat<Elem>> {
    let rows = rows_arg(field, arg, s)?;
    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
        return Err(usage(arg, format!("expected a {n}x{n} matrix")));
    }
    Ok(Mat::from_rows(rows))
}

fn frame_arg(field: &Field, arg: &str, s: &str) -> Result<[Vec<Elem>; 3]> {
    let rows = rows_arg(field, arg, s)?;
    if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
        return Err(usage(arg, "expected three points a,b,c;a,b,c;a,b,c"));
    }
    Ok([rows[0].clone(), rows[1].clone(), rows[2].clone()])
}

fn map_arg(field: &Field, arg: &str, s: &str) -> Result<ProjectiveMap> {
    let r = projective_ring(field);
    let comps: Vec<_> = s.split(';').map(|c| parse_poly(&r, c.trim()).map_err(|e| usage(arg, e))).collect::<Result<_>>()?;
    let comps: [_; 3] = comps.try_into().map_err(|_| usage(arg, "expected three components separated by ';'"))?;
    ProjectiveMap::new(comps).map_err(|e| usage(arg, e))
}

fn word_arg(s: &str) -> Result<LinkWord> {
    s.parse().map_err(|e| usage("--word", e))
}

fn space_arg(a: &FormArgs) -> Result<QuadraticSpace<Elem>> {
    let field = field_arg("--field", &a.field)?;
    let vars = match &a.vars {
        Some(v) => v.clone(),
        None => {
            let mut v: Vec<String> = a
                .form
                .split(|c: char| !c.is_ascii_alphanumeric() && c != '_')
                .filter(|t| t.chars().next().is_some_and(|c| c.is_ascii_alphabetic()) && !field.names().iter().any(|n| n == t))
                .map(str::to_string)
                .collect();
            v.sort();
            v.dedup();
            v
        }
    };
    let refs: Vec<&str> = vars.iter().map(String::as_str).collect();
    let r = poly_ring(&field, &refs);
    let form = parse_poly(&r, &a.form).map_err(|e| usage("--form", e))?;
    QuadraticSpace::new(form).map_err(|e| usage("--form", e))
}

fn fibration_arg(a: &FibArgs) -> Result<Fibration> {
    let field = field_arg("--field", &a.field)?;
    if let Some(c) = &a.center {
        return Fibration::lines(&elems_arg(&field, "--center", c)?).map_err(|e| usage("--center", e));
    }
    if let Some(s) = &a.two_two {
        let rows = rows_arg(&field, "--two-two", s)?;
        let monic = |r: &Vec<Elem>| -> Result<Vec<Elem>> {
            match &r[..] {
                [c0, c1] => Ok(vec![c0.clone(), c1.clone(), field.one()]),
                _ => Err(usage("--two-two", "each quadratic is given as c0,c1")),
            }
        };
        let [my, mz] = &rows[..] else { return Err(usage("--two-two", "expected two quadratics")) };
        return Fibration::two_two(&monic(my)?, &monic(mz)?).map_err(|e| usage("--two-two", e));
    }
    match &a.quartic {
        Some(s) => match &elems_arg(&field, "--quartic", s)?[..] {
            [a, b, c, d] => Fibration::quartic(a, b, c, d).map_err(|e| usage("--quartic", e)),
            _ => Err(usage("--quartic", "expected four coefficients a,b,c,d")),
        },
        None => samples::first_quartic_fibration(&field).map_err(|e| usage("--field", e)),
    }
}

fn monic_quadratic_arg(field: &Field, arg: &str, s: &str) -> Result<Vec<Elem>> {
    let r = poly_ring(field, &["x"]);
    let p = parse_poly(&r, s).map_err(|e| usage(arg, e))?;
    let coeffs = p.coeffs_in(0);
    let c = |e: u32| coeffs.get(&e).and_then(|c| c.as_constant()).unwrap_or_else(|| field.zero());
    if p.degree_in(0) != 2 || !c(2).is_one() {
        return Err(usage(arg, "expected a monic quadratic in x"));
    }
    Ok(vec![c(0), c(1), c(2)])
}

fn exorcist_arg(a: &JonqArgs) -> Result<ExorcistData> {
    let k = field_arg("--field", &a.field)?;
    let l = monic_quadratic_arg(&k, "--L", &a.l)?;
    let lp = monic_quadratic_arg(&k, "--Lp", &a.lp)?;
    ExorcistData::new(&l, &lp).map_err(|e| usage("--L/--Lp", e))
}

fn mat_product(n: usize, field: &Field, fs: &[Mat<Elem>]) -> Mat<Elem> {
    fs.iter().fold(Mat::identity(field, n), |acc, m| acc.mul(m))
}

fn random_gl3<R: Rng>(k: &Field, g: &mut R) -> Mat<Elem> {
    loop {
        let m = Mat::from_rows((0..3).map(|_| (0..3).map(|_| k.random(g)).collect()).collect());
        if !m.det().is_zero() {
            return m;
        }
    }
}

fn run(cli: &Cli) -> Result<RunReport> {
    let mut g = samples::rng(cli.seed);
    let rep = match &cli.cmd {
        Cmd::Field { spec } => {
            let f = field_arg("--spec", spec)?;
            let mut r = RunReport::new("field");
            r.input("spec", spec.as_str());
            r.value("description", f.describe()).value("characteristic", f.characteristic()).value("degree", f.degree()).value("field", field_to_json(&f));
            r.value("order", f.order().map(|q| q.to_string()));
            for s in f.galois_generators() {
                r.check(&format!("automorphism {}", s.name), f.verify_auto(s), (0..f.num_steps()).map(|i| f.auto_image(s, i).to_string()).collect::<Vec<_>>());
            }
            r.value("galois-complete", f.galois_complete());
            if let Some(q) = f.order().filter(|&q| q <= 1 << 10) {
                let elems = f.elements(q)?;
                let n = projective_points(&f, &elems).len() as u128;
                r.check("projective plane points = q^2+q+1", n == q * q + q + 1, n.to_string());
            }
            r
        }
        Cmd::Qform(QformCmd::Factor { form, matrix, random, so, height }) => {
            let s = space_arg(form)?;
            let field = s.ctx().clone();
            let n = s.dim();
            let mut r = RunReport::new(if *so { "qform factor --so" } else { "qform factor" });
            r.input("field", form.field.as_str()).input("form", s.form().to_string()).input("seed", cli.seed).input("random", *random);
            let cert = s.isotropy_search(*height);
            r.check("anisotropic", cert.is_anisotropic(), json!({"status": cert.status, "note": cert.note}));
            let mut inputs = Vec::new();
            if let Some(m) = matrix {
                inputs.push(("matrix".to_string(), matrix_arg(&field, "--matrix", m, n)?));
            }
            for i in 0..*random {
                let count = if *so && s.characteristic() != 2 { 2 * g.gen_range(0..=(n - 1) / 2) } else { g.gen_range(0..=n) };
                inputs.push((format!("sample {i}"), samples::random_isometry(&s, count, &mut g)));
            }
            for (name, m) in inputs {
                let res = if *so { s.so_involution_factorization(&m, &cert) } else { s.cartan_dieudonne(&m, &cert) };
                match res {
                    Ok(fs) => {
                        let mats: Vec<Mat<Elem>> = fs.iter().map(|f| f.matrix.clone()).collect();
                        let exact = mat_product(n, &field, &mats) == m;
                        let count_ok = if *so {
                            let bound = if s.characteristic() == 2 { n } else { n - 1 };
                            fs.len() <= bound && mats.iter().all(|f| f.mul(f).is_identity() && f.det().is_one())
                        } else {
                            fs.len() == s.fixed_codim(&m) && fs.len() <= n
                        };
                        r.check(&name, exact && count_ok, json!({"factors": fs.len(), "codim-fixed": s.fixed_codim(&m), "kinds": fs.iter().map(|f| f.kind).collect::<Vec<_>>(), "matrices": mats.iter().map(mat_to_json).collect::<Vec<_>>()}));
                    }
                    Err(e) => {
                        r.check(&name, false, e.to_string());
                    }
                }
            }
            r
        }
        Cmd::Qform(QformCmd::Defect { form }) => {
            let s = space_arg(form)?;
            let d = s.radical_and_defect();
            let mut r = RunReport::new("qform defect");
            r.input("field", form.field.as_str()).input("form", s.form().to_string());
            r.value("class", json!(d.class)).value("radical", d.radical.iter().map(|v| v.iter().map(elem_to_json).collect::<Vec<_>>()).collect::<Vec<_>>());
            r.value("radical-anisotropic", d.radical_anisotropic).value("gram", mat_to_json(s.gram()));
            r
        }
        Cmd::Qform(QformCmd::Isotropy { form, height }) => {
            let s = space_arg(form)?;
            let c = s.isotropy_search(*height);
            let mut r = RunReport::new("qform isotropy");
            r.input("field", form.field.as_str()).input("form", s.form().to_string()).input("height", *height);
            let witness_ok = c.witness.as_ref().map_or(true, |w| s.eval(w).is_zero());
            r.check("certificate", witness_ok, json!({"status": c.status, "note": c.note, "witness": c.witness.as_ref().map(|w| w.iter().map(elem_to_json).collect::<Vec<_>>())}));
            r
        }
        Cmd::Map(MapCmd::Compose { field, f, g: gs }) => {
            let k = field_arg("--field", field)?;
            let (f, h) = (map_arg(&k, "--f", f)?, map_arg(&k, "--g", gs)?);
            let c = f.compose(&h)?;
            let mut r = RunReport::new("map compose");
            r.input("f", f.to_string()).input("g", h.to_string());
            r.check("composition agrees with the raw substitution", c.agrees_with(&f.compose_raw(&h)), map_to_json(&c));
            r
        }
        Cmd::Map(MapCmd::Involution { field, f, points, images, random_frames }) => {
            let k = field_arg("--field", field)?;
            let mut r = RunReport::new("map involution");
            if let Some(f) = f {
                let f = map_arg(&k, "--f", f)?;
                r.input("f", f.to_string());
                match (points, images) {
                    (Some(p), Some(q)) => {
                        let (p, q) = (frame_arg(&k, "--points", p)?, frame_arg(&k, "--images", q)?);
                        match quadratic_involution_from(&f, &p, &q, true) {
                            Ok(res) => r.check("alpha∘f is an involution", res.iota.is_involution(), json!({"alpha": mat_to_json(&res.alpha), "iota": map_to_json(&res.iota)})),
                            Err(e) => r.check("alpha∘f is an involution", false, e.to_string()),
                        };
                    }
                    (None, None) => {
                        r.check("involution", f.is_involution(), map_to_json(&f));
                    }
                    _ => return Err(usage("--points/--images", "give both or neither")),
                }
            }
            let sigma = ProjectiveMap::sigma(&k);
            let e = |i: usize| (0..3).map(|j| if i == j { k.one() } else { k.zero() }).collect::<Vec<_>>();
            for i in 0..*random_frames {
                let (a, b) = (random_gl3(&k, &mut g), random_gl3(&k, &mut g));
                let f = ProjectiveMap::linear(&b)?.compose(&sigma)?.compose(&ProjectiveMap::linear(&a.inverse().context("invertible")?)?)?;
                let col = |m: &Mat<Elem>, i: usize| m.mul(&Mat::from_rows(e(i).into_iter().map(|x| vec![x]).collect())).to_rows().into_iter().map(|r| r[0].clone()).collect::<Vec<_>>();
                let p = [col(&a, 0), col(&a, 1), col(&a, 2)];
                let q = [col(&b, 0), col(&b, 1), col(&b, 2)];
                match quadratic_involution_from(&f, &p, &q, true) {
                    Ok(res) => r.check(&format!("frame {i}"), res.iota.is_involution(), json!({"alpha": mat_to_json(&res.alpha), "permutation": res.permutation})),
                    Err(e) => r.check(&format!("frame {i}"), false, e.to_string()),
                };
            }
            r.input("random-frames", *random_frames).input("seed", cli.seed);
            r
        }
        Cmd::Fib(FibCmd::Build { fib }) => {
            let f = fibration_arg(fib)?;
            let mut r = RunReport::new("fib build");
            r.input("field", fib.field.as_str());
            r.value("kind", json!(f.kind)).value("q1", poly_to_json(&f.q1)).value("q2", poly_to_json(&f.q2));
            r.value("q1-text", f.q1.to_string()).value("q2-text", f.q2.to_string());
            r.check("base points annihilate both generators", f.check_base_points(), f.base_points.iter().map(|b| json!({"field": b.field.describe(), "coords": b.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>()})).collect::<Vec<_>>());
            r.value("certified", f.certified);
            let c = f.pencil_isotropy(50);
            r.value("pencil isotropy", json!({"status": c.status, "note": c.note}));
            r
        }
        Cmd::Fib(FibCmd::Bridge { fib, count, deg }) => {
            let f = fibration_arg(fib)?;
            let ps = f.pencil_space()?;
            let mut r = RunReport::new("fib bridge");
            r.input("field", fib.field.as_str()).input("q1", f.q1.to_string()).input("q2", f.q2.to_string()).input("count", *count).input("deg", *deg).input("seed", cli.seed);
            let id2 = Mat::identity(&f.field, 2);
            let mut prev: Option<(Mat<_>, ProjectiveMap)> = None;
            for i in 0..*count {
                let a = samples::random_t_special(&ps.space, *deg, &mut g);
                let m = f.pgo_to_cremona(&a)?;
                let fixes = f.preserves(&m).is_some_and(|al| pgl_equal(&al, &id2));
                r.check(&format!("sample {i}: pi∘f = pi"), fixes, json!({"degree": m.degree(), "matrix": mat_to_strings(&a)}));
                if let Some((pa, pm)) = &prev {
                    let ab = f.pgo_to_cremona(&pa.mul(&a))?;
                    r.check(&format!("sample {}·{i}: image of product = composition", i - 1), ab.agrees_with(&pm.compose_raw(&m)), ab.degree());
                }
                prev = Some((a, m));
            }
            r
        }
        Cmd::Fib(FibCmd::Factor { fib, count, deg }) => {
            let f = fibration_arg(fib)?;
            let ps = f.pencil_space()?;
            let bound = if f.field.characteristic() == 2 { 3 } else { 2 };
            let mut r = RunReport::new("fib factor");
            r.input("field", fib.field.as_str()).input("q1", f.q1.to_string()).input("q2", f.q2.to_string()).input("count", *count).input("deg", *deg).input("seed", cli.seed);
            for i in 0..*count {
                let a = samples::random_t_special(&ps.space, *deg, &mut g);
                match f.fiberwise_involution_factorization(&a) {
                    Ok(invs) => r.check(&format!("sample {i}: at most {bound} involutions"), invs.len() <= bound, json!({"involutions": invs.len(), "degrees": invs.iter().map(|m| m.degree()).collect::<Vec<_>>()})),
                    Err(e) => r.check(&format!("sample {i}"), false, e.to_string()),
                };
            }
            r
        }
        Cmd::Jonq22(JonqCmd::Gen { data, lambda, count }) => {
            let ex = exorcist_arg(data)?;
            let mut r = RunReport::new("jonq22 gen");
            r.input("field", data.field.as_str()).input("L", data.l.as_str()).input("Lp", data.lp.as_str()).input("composite", ex.big.describe());
            let lambdas: Vec<Elem> = match lambda {
                Some(s) => vec![parse_elem(&ex.big, s).map_err(|e| usage("--lambda", e))?],
                None => {
                    r.input("seed", cli.seed).input("count", *count);
                    (0..*count)
                        .map(|_| {
                            let u = ex.big.random_nonzero(&mut g);
                            match &ex.h {
                                // λλ^h = 1 forces λ = u/u^h.
                                Some(h) => u.div(&u.conj(h)).expect("u is nonzero"),
                                None => u,
                            }
                        })
                        .collect()
                }
            };
            for (i, lam) in lambdas.iter().enumerate() {
                let name = format!("lambda {i}");
                match ex.h_family_involution(lam) {
                    Ok(h) => {
                        let ok = h.map.is_involution();
                        r.check(&name, ok, json!({"lambda": lam.to_string(), "mu": h.mu.to_string(), "iota": h.iota.to_string(), "map": map_to_json(&h.map), "alpha": mat_to_json(&h.alpha)}))
                    }
                    Err(e) => r.check(&name, false, json!({"lambda": lam.to_string(), "error": e.to_string()})),
                };
            }
            r
        }
        Cmd::Jonq22(JonqCmd::Check { data }) => {
            let ex = exorcist_arg(data)?;
            let mut r = RunReport::new("jonq22 check");
            r.input("field", data.field.as_str()).input("L", data.l.as_str()).input("Lp", data.lp.as_str());
            r.value("composite", ex.big.describe()).value("same-field", ex.same_field);
            r.value("epsilon", ex.eps.to_string()).value("epsilon-inverse", ex.eps_inv.to_string());
            r.check("epsilon∘epsilon^-1 = id", ex.eps.compose(&ex.eps_inv)?.is_identity(), true);
            match ex.actions() {
                Ok(acts) => {
                    for a in &acts {
                        r.check(&format!("action of {:?} matches the closed form and is involutive", a.which), a.is_involutive()?, a.map.to_string());
                    }
                    if let [a, b] = &acts[..] {
                        let ab = a.map.compose(&b.map.conj(&a.sigma))?;
                        let ba = b.map.compose(&a.map.conj(&b.sigma))?;
                        r.check("actions commute", ab == ba, ab.to_string());
                    }
                }
                Err(e) => {
                    r.check("induced actions", false, e.to_string());
                }
            }
            let fib = ex.fibration()?;
            r.check("pencil base points", fib.check_base_points(), json!({"q1": fib.q1.to_string(), "q2": fib.q2.to_string()}));
            r
        }
        Cmd::Graph(GraphCmd::Validate { word, mode }) => {
            let w = word_arg(word)?;
            let gr = SarkisovGraph::standard((*mode).into());
            let mut r = RunReport::new("graph validate");
            r.input("word", w.to_string());
            r.check("valid", gr.validate_word(&w), json!({"length": w.len(), "closed": w.is_closed()}));
            r
        }
        Cmd::Graph(GraphCmd::Classify { word, mode }) => {
            let w = word_arg(word)?;
            let gr = SarkisovGraph::standard((*mode).into());
            let mut r = RunReport::new("graph classify");
            r.input("word", w.to_string());
            match gr.classify_word(&w) {
                Ok(c) => r.check("classified", true, serde_json::to_value(&c)?),
                Err(e) => r.check("classified", false, e.to_string()),
            };
            r
        }
        Cmd::Graph(GraphCmd::Enumerate { max_sl, kind, mode }) => {
            let gr = SarkisovGraph::standard((*mode).into());
            let e = gr.enumerate_irreducible_types(*max_sl).map_err(|e| usage("--max-sl", e))?;
            let mut r = RunReport::new("graph enumerate");
            r.input("max-sl", *max_sl);
            if *kind != KindArg::Fibering {
                let words: Vec<String> = e.del_pezzo.iter().map(LinkWord::to_string).collect();
                r.value("del-pezzo count", words.len()).value("del-pezzo", words);
                if *max_sl == 5 && matches!(mode, ModeArg::General) {
                    let mut got = e.del_pezzo.clone();
                    let mut want = table_words();
                    got.sort_by_key(|w| w.to_string());
                    want.sort_by_key(|w| w.to_string());
                    r.check("del-pezzo words equal the reference table", got == want, want.len());
                }
            }
            if *kind != KindArg::Delpezzo {
                let shapes: Vec<Value> = e.fibering.iter().map(|w| json!({"word": w.to_string(), "shape": gr.classify_word(w).ok().and_then(|c| c.shape)})).collect();
                r.value("fibering count", shapes.len()).value("fibering", shapes);
            }
            r
        }
        Cmd::Graph(GraphCmd::Counts { word, q }) => {
            let w = word_arg(word)?;
            let mut r = RunReport::new("graph counts");
            r.input("word", w.to_string()).input("q", *q);
            r.check("word is valid", SarkisovGraph::standard(GraphMode::General).validate_word(&w), w.len());
            match point_count_along(&w, *q) {
                Ok(c) => r.check("counts stay at least 3", c.iter().all(|&n| n >= 3), c),
                Err(e) => r.check("counts", false, e.to_string()),
            };
            r
        }
        Cmd::Pieces(PiecesCmd::List) => {
            let mut r = RunReport::new("pieces list");
            let all: Vec<PieceSummary> = piece_catalog().iter().map(PieceSummary::from).collect();
            r.value("count", all.len()).value("pieces", serde_json::to_value(&all)?);
            r
        }
        Cmd::Pieces(PiecesCmd::Show { name }) => {
            let p = find_piece(name).map_err(|e| usage("name", e))?;
            let mut r = RunReport::new("pieces show");
            r.input("name", name.as_str());
            r.value("piece", serde_json::to_value(p)?);
            r.value("symmetry", serde_json::to_value(central_symmetry(p)?)?);
            r
        }
        Cmd::Pieces(PiecesCmd::Validate) => {
            let gr = SarkisovGraph::standard(GraphMode::General);
            let mut r = RunReport::new("pieces validate");
            for p in piece_catalog() {
                let sym = central_symmetry(p);
                let sym_ok = match &sym {
                    Ok(s) => s.is_some() == (p.center_degree <= 2),
                    Err(_) => false,
                };
                let deg_ok = p.names.iter().all(|n| n.center_degree() == Some(p.center_degree));
                r.check(&p.canonical, validate_piece(p, &gr) && sym_ok && deg_ok, json!({"figure": p.figure, "sides": p.sides, "center": p.center_degree, "symmetric": sym.ok().flatten().map(|s| s.kind)}));
            }
            let sq = conic_square(cremona::graph::Vertex::C8, 2, 3)?;
            r.check("conic square C8 (2,3)", validate_piece(&sq, &gr), sq.boundary.to_string());
            r
        }
        Cmd::Reduce { word, field, max_sl } => {
            let w = word_arg(word)?;
            let f2 = match field {
                Some(s) if s.eq_ignore_ascii_case("f2") => true,
                Some(s) => field_arg("--field", s)?.order() == Some(2),
                None => false,
            };
            let opts = ReduceOptions { f2, max_sl: *max_sl, ..ReduceOptions::default() };
            let mut r = RunReport::new("reduce");
            r.input("word", w.to_string()).input("f2", f2);
            match reduce_to_involutions(&w, &opts) {
                Ok(red) => {
                    r.check("pure involution tokens", red.pure(), red.tokens.len());
                    r.check("pending length strictly decreases", red.strictly_decreasing(), red.pending_lengths.clone());
                    r.value("trace", json!({"steps": red.steps, "tokens": red.tokens, "assumptions": red.assumptions}));
                }
                Err(e) => {
                    r.check("reduction", false, e.to_string());
                }
            }
            r
        }
    };
    Ok(rep)
}

fn summary(r: &RunReport) -> String {
    let mut out = format!("{}\n", r.command);
    for c in &r.results {
        let v = match &c.value {
            Value::String(s) => s.clone(),
            v => v.to_string(),
        };
        let v = if v.chars().count() > 160 { format!("{}…", v.chars().take(160).collect::<String>()) } else { v };
        out += &format!("  [{}] {}: {}\n", if c.pass { "ok" } else { "FAIL" }, c.name, v);
    }
    out += if r.pass { "PASS\n" } else { "FAIL\n" };
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(rep) => {
            let js = rep.to_json();
            if let Some(path) = &cli.out {
                if let Err(e) = std::fs::write(path, format!("{js}\n")) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            }
            if cli.json {
                println!("{js}");
            } else {
                print!("{}", summary(&rep));
            }
            ExitCode::from(if rep.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.downcast_ref::<Usage>().is_some() { 2 } else { 1 })
        }
    }
}
