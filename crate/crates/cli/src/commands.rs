use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use num_complex::Complex64;
use qnr_core::cnumrange::{compute_wc, frame_oracle, sandwich_check, Coefficients, CnumError};
use qnr_core::geometry::{hausdorff_support, ConvexRegion, DEFAULT_GRID};
use qnr_core::io::{
    matrix_to_json, read_matrix, write_boundary, write_sweep, ComputationBlock, OracleBlock, PredictorBlock,
    Provenance, Report, SandwichBlock, SignatureBlock,
};
use qnr_core::numrange::{compute_range, sample_oracle, SupportTable};
use qnr_core::operators::{run_sweep, Family};
use qnr_core::quadratic::{assemble_canonical, fit_quadratic, predict_w, Conjugation};
use qnr_core::ComplexMatrix;

use crate::config::{pick_text, Config};
use crate::parse;
use crate::{AnalyzeArgs, CnumArgs, GenArgs, GenFamily, SweepArgs, SweepFamily};

const EXIT_NOT_QUADRATIC: u8 = 2;
const EXIT_TOO_MANY_COEFFICIENTS: u8 = 3;

fn load_matrix(path: &Path) -> Result<ComplexMatrix> {
    read_matrix(path).with_context(|| format!("reading matrix {}", path.display()))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn write_region(path: Option<&PathBuf>, region: &ConvexRegion) -> Result<()> {
    if let Some(p) = path {
        let file = File::create(p).with_context(|| format!("creating {}", p.display()))?;
        write_boundary(file, region)?;
    }
    Ok(())
}

fn max_excess(region: &ConvexRegion, points: &[Complex64]) -> f64 {
    points.iter().map(|&z| region.outer_excess(z)).fold(f64::NEG_INFINITY, f64::max)
}

fn symbol(flag: Option<String>, config: &Config) -> Result<Complex64> {
    let text = pick_text(flag, &config.p)?.ok_or_else(|| anyhow!("--p is required for this family"))?;
    parse::complex(&text)
}

fn beta(flag: Option<f64>, config: &Config) -> Result<f64> {
    flag.or(config.beta).ok_or_else(|| anyhow!("--beta is required for this family"))
}

pub fn analyze(args: AnalyzeArgs, config: &Config, timestamp: bool) -> Result<u8> {
    let angles = args.angles.or(config.angles).unwrap_or(DEFAULT_GRID);
    let trials = args.oracle.or(config.oracle).unwrap_or(0);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let report_path = args.report.or_else(|| config.report.clone());
    let boundary_path = args.boundary.or_else(|| config.boundary.clone());

    let a = load_matrix(&args.input)?;
    let sig = fit_quadratic(&a);
    let table = compute_range(&a, angles)?;
    let prediction = if sig.is_quadratic() { Some(predict_w(&sig)?) } else { None };
    let hausdorff = prediction
        .as_ref()
        .map(|p| hausdorff_support(&p.ellipse, &table.region, angles))
        .transpose()?;
    let oracle = if trials > 0 {
        let points = sample_oracle(&a, trials, seed)?;
        Some(OracleBlock {
            trials,
            seed,
            max_outer_excess: max_excess(&table.region, &points),
        })
    } else {
        None
    };

    let mut report = Report::new(Provenance::new("analyze", Some(seed), timestamp));
    report.signature = Some(SignatureBlock::new(&sig, prediction.as_ref()));
    report.computation = Some(ComputationBlock {
        grid: angles,
        hausdorff_vs_prediction: hausdorff,
        witness_gap: table.witness_line_gap(),
        oracle,
    });
    write_text(report_path.as_deref(), &report.to_json()?)?;
    write_region(boundary_path.as_ref(), &table.region)?;

    if prediction.is_none() {
        eprintln!("matrix is not quadratic (residual {:e})", sig.residual);
        return Ok(EXIT_NOT_QUADRATIC);
    }
    Ok(0)
}

pub fn gen(args: GenArgs, config: &Config, timestamp: bool) -> Result<u8> {
    let out = args
        .out
        .or_else(|| config.out.clone())
        .ok_or_else(|| anyhow!("--out is required"))?;
    let size = args.size.or(config.size);
    let need_size = || size.ok_or_else(|| anyhow!("--size is required for this family"));
    let seed = args.seed.or(config.seed);

    let family = match args.family {
        GenFamily::Composition => Some(Family::Composition {
            p: symbol(args.p, config)?,
        }),
        GenFamily::Hankel => Some(Family::Hankel {
            beta: beta(args.beta, config)?,
        }),
        GenFamily::CauchyCircle => Some(Family::CauchyCircle),
        GenFamily::Canonical => None,
    };
    let name = match args.family {
        GenFamily::Composition => "composition",
        GenFamily::Hankel => "hankel",
        GenFamily::CauchyCircle => "cauchy-circle",
        GenFamily::Canonical => "canonical",
    };
    let mut report = Report::new(Provenance::new(format!("gen {name}"), seed, timestamp));

    let matrix = match family {
        Some(f) => {
            let m = f.matrix(need_size()?)?;
            // Hankel exponents with |beta| >= 1/2 have no singular-operator prediction
            report.predictor = f.predict().ok().map(|p| PredictorBlock::from(&p));
            m
        }
        None => {
            let lambda_text = pick_text(args.lambda, &config.lambda)?.ok_or_else(|| anyhow!("--lambda is required"))?;
            let lambda = parse::complex_list(&lambda_text)?;
            if lambda.len() != 2 {
                bail!("--lambda needs exactly two values, got {}", lambda.len());
            }
            let x_text = pick_text(args.x, &config.x)?.ok_or_else(|| anyhow!("--x is required"))?;
            let x = parse::real_list(&x_text)?;
            if x.is_empty() || x.iter().any(|&v| !(v > 0.0)) {
                bail!("--x needs positive values");
            }
            let dims = match pick_text(args.dims, &config.dims)? {
                Some(t) => match parse::size_list(&t)?.as_slice() {
                    &[d1, d2] => (d1, d2),
                    _ => bail!("--dims needs two sizes"),
                },
                None => (0, 0),
            };
            let conjugation = match seed {
                Some(s) => Conjugation::Random { seed: s },
                None => Conjugation::Identity,
            };
            let m = assemble_canonical(lambda[0], lambda[1], &x, dims, conjugation);
            let sig = fit_quadratic(&m);
            let pred = predict_w(&sig)?;
            report.signature = Some(SignatureBlock::new(&sig, Some(&pred)));
            m
        }
    };
    std::fs::write(&out, matrix_to_json(&matrix)?).with_context(|| format!("writing {}", out.display()))?;
    write_text(None, &report.to_json()?)?;
    Ok(0)
}

pub fn sweep(args: SweepArgs, config: &Config) -> Result<u8> {
    let family = match args.family {
        SweepFamily::Composition => Family::Composition {
            p: symbol(args.p, config)?,
        },
        SweepFamily::Hankel => Family::Hankel {
            beta: beta(args.beta, config)?,
        },
        SweepFamily::CauchyCircle => Family::CauchyCircle,
    };
    let sizes_text = pick_text(args.sizes, &config.sizes)?.ok_or_else(|| anyhow!("--sizes is required"))?;
    let sizes = parse::size_list(&sizes_text)?;
    let result = run_sweep(family, &sizes)?;
    for w in &result.warnings {
        eprintln!("warning: {w}");
    }
    let mut buf = Vec::new();
    write_sweep(&mut buf, &result.rows)?;
    let out = args.out.or_else(|| config.out.clone());
    write_text(out.as_deref(), std::str::from_utf8(&buf)?)?;
    Ok(0)
}

pub fn cnum(args: CnumArgs, config: &Config, timestamp: bool) -> Result<u8> {
    let angles = args.angles.or(config.angles).unwrap_or(DEFAULT_GRID);
    let trials = args.oracle.or(config.oracle).unwrap_or(0);
    let seed = args.seed.or(config.seed).unwrap_or(0);
    let s0 = args.s0.or(config.s0);
    let report_path = args.report.or_else(|| config.report.clone());
    let boundary_path = args.boundary.or_else(|| config.boundary.clone());

    let a = load_matrix(&args.input)?;
    let c_text = pick_text(args.c, &config.c)?.ok_or_else(|| anyhow!("--c is required"))?;
    let c = Coefficients::new(&parse::real_list(&c_text)?)?;
    if c.dropped > 0 {
        eprintln!("warning: dropped {} zero coefficient(s)", c.dropped);
    }

    let region = match compute_wc(&a, &c, angles) {
        Err(CnumError::TooManyCoefficients { k, n }) => {
            eprintln!("error: {k} non-zero coefficients exceed the dimension {n}");
            return Ok(EXIT_TOO_MANY_COEFFICIENTS);
        }
        other => other?,
    };
    let sig = fit_quadratic(&a);
    let (prediction, sandwich) = if sig.is_quadratic() {
        let report = sandwich_check(&a, &sig, &c, s0, angles)?;
        (Some(predict_w(&sig)?), Some(SandwichBlock::from(&report)))
    } else {
        (None, None)
    };
    let oracle = if trials > 0 {
        let points = frame_oracle(&a, &c, trials, seed)?;
        Some(OracleBlock {
            trials,
            seed,
            max_outer_excess: max_excess(&region, &points),
        })
    } else {
        None
    };

    let mut report = Report::new(Provenance::new("cnum", Some(seed), timestamp));
    report.c = Some(c.values().to_vec());
    report.signature = Some(SignatureBlock::new(&sig, prediction.as_ref()));
    report.computation = Some(ComputationBlock {
        grid: angles,
        hausdorff_vs_prediction: None,
        witness_gap: SupportTable { region: region.clone() }.witness_line_gap(),
        oracle,
    });
    report.sandwich = sandwich;
    write_text(report_path.as_deref(), &report.to_json()?)?;
    write_region(boundary_path.as_ref(), &region)?;
    Ok(0)
}
