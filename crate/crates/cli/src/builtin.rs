//! Named built-in states: `bell`, `ghz4` / `ghz(4)`, `w4` / `w(4)`,
//! `zero3` / `zero(3)`, `phi1`, `phi2`, `phitheta:30` / `phitheta(30)`.

use kprod_core::{states, PureState};

use crate::CliError;

fn split_arg(name: &str) -> (&str, Option<&str>) {
    if let Some(open) = name.find('(') {
        if let Some(inner) = name[open + 1..].strip_suffix(')') {
            return (&name[..open], Some(inner));
        }
    }
    if let Some((head, tail)) = name.split_once(':') {
        return (head, Some(tail));
    }
    let digits = name.trim_start_matches(|c: char| !c.is_ascii_digit());
    if !digits.is_empty() && matches!(&name[..name.len() - digits.len()], "ghz" | "w" | "zero") {
        return (&name[..name.len() - digits.len()], Some(digits));
    }
    (name, None)
}

fn size(family: &str, arg: Option<&str>) -> Result<usize, CliError> {
    let arg = arg.ok_or_else(|| CliError::Usage(format!("builtin `{family}` needs a size, e.g. {family}4")))?;
    arg.trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("bad size `{arg}` for builtin `{family}`")))
}

pub fn parse(name: &str) -> Result<PureState, CliError> {
    let name = name.trim().to_ascii_lowercase();
    let (family, arg) = split_arg(&name);
    let state = match family {
        "bell" => states::bell(),
        "phi1" => states::phi1(),
        "phi2" => states::phi2(),
        "ghz" => states::ghz(size(family, arg)?)?,
        "w" => states::w(size(family, arg)?)?,
        "zero" => {
            let n = size(family, arg)?;
            states::basis(&vec![2; n], &vec![0; n])?
        }
        "phitheta" => {
            let arg = arg.ok_or_else(|| CliError::Usage("phitheta needs an angle in degrees".into()))?;
            let theta: f64 = arg
                .trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad angle `{arg}`")))?;
            states::phitheta(theta)
        }
        _ => return Err(CliError::Usage(format!("unknown builtin `{name}`"))),
    };
    Ok(state)
}
