//! Named cocycle families and rotation-number parsing.

use cocycle_core::{
    block_embed, half_speed, CircleRotation, DiscreteCocycle, Generator, HermanConvention, HermanParameters, Mat,
};

use crate::error::{CliError, CliResult};

pub const FAMILIES: &[&str] = &[
    "identity",
    "identity3",
    "herman",
    "herman-cw",
    "herman-embedded",
    "herman-embedded-halfspeed",
    "herman-doubled",
    "constant-diag",
    "constant-diag3",
    "diagonal-sine",
    "rotation:K",
];

/// Parses `golden`, `p/q` or a decimal. Decimal input is tagged irrational
/// and returned with a warning.
pub fn parse_alpha(arg: &str) -> CliResult<(CircleRotation, Option<String>)> {
    let arg = arg.trim();
    if arg == "golden" {
        return Ok((CircleRotation::golden(), None));
    }
    if let Some((p, q)) = arg.split_once('/') {
        let parse = |s: &str| {
            s.trim()
                .parse::<u64>()
                .map_err(|_| CliError::Config(format!("cannot parse rational alpha '{arg}'")))
        };
        return Ok((CircleRotation::rational(parse(p)?, parse(q)?)?, None));
    }
    let value: f64 = arg
        .parse()
        .map_err(|_| CliError::Config(format!("alpha must be 'golden', 'p/q' or a decimal, got '{arg}'")))?;
    let warning =
        format!("alpha {arg} is a floating-point number and hence effectively rational; treating it as irrational");
    Ok((CircleRotation::irrational(value)?, Some(warning)))
}

/// Builds the named cocycle over the given rotation.
pub fn build_cocycle(name: &str, lambda: f64, rotation: CircleRotation) -> CliResult<DiscreteCocycle> {
    let herman = |c| -> CliResult<DiscreteCocycle> {
        let params = HermanParameters::with_convention(lambda, c)?;
        Ok(DiscreteCocycle::new(rotation, Generator::Herman(params))?)
    };
    let c = match name {
        "identity" => DiscreteCocycle::identity(rotation, 2)?,
        "identity3" => DiscreteCocycle::identity(rotation, 3)?,
        "herman" => herman(HermanConvention::CounterClockwise)?,
        "herman-cw" => herman(HermanConvention::Clockwise)?,
        "herman-embedded" => block_embed(&herman(HermanConvention::CounterClockwise)?)?,
        "herman-embedded-halfspeed" => half_speed(&block_embed(&herman(HermanConvention::CounterClockwise)?)?),
        "herman-doubled" => half_speed(&herman(HermanConvention::CounterClockwise)?),
        "constant-diag" => DiscreteCocycle::constant(rotation, Mat::diag(&[lambda, 1.0 / lambda]))?,
        "constant-diag3" => DiscreteCocycle::constant(rotation, Mat::diag(&[lambda, 1.0, 1.0 / lambda]))?,
        "diagonal-sine" => DiscreteCocycle::new(rotation, Generator::DiagonalSine(lambda.ln()))?,
        other => match other.strip_prefix("rotation:") {
            Some(k) => {
                let k: i64 = k
                    .parse()
                    .map_err(|_| CliError::Config(format!("cannot parse rotation power in '{other}'")))?;
                DiscreteCocycle::new(rotation, Generator::RotationPower(k))?
            }
            None => {
                return Err(CliError::Config(format!(
                    "unknown cocycle '{other}'; expected one of {}",
                    FAMILIES.join(", ")
                )))
            }
        },
    };
    Ok(c)
}

pub fn is_herman(name: &str) -> bool {
    name.starts_with("herman")
}
