//! Flag-value parsing and exact decimal rendering.

use hdswap_core::{Phase, Rational};
use num_bigint::BigInt;

/// Parses a comma-separated list of rationals given as decimals ("0.95"),
/// fractions ("19/20") or integers ("1").
///
/// # Errors
///
/// A message naming the offending entry.
pub fn parse_rational_values(text: &str) -> Result<Vec<Rational>, String> {
    let values: Result<Vec<Rational>, String> =
        text.split(',').map(|part| parse_rational(part.trim())).collect();
    let values = values?;
    if values.is_empty() {
        return Err("no values given".to_string());
    }
    Ok(values)
}

/// Parses one rational from decimal, fraction or integer notation.
///
/// # Errors
///
/// A message naming the malformed piece.
pub fn parse_rational(text: &str) -> Result<Rational, String> {
    if text.is_empty() {
        return Err("empty number".to_string());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| format!("bad numerator in {text:?}"))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| format!("bad denominator in {text:?}"))?;
        if den == BigInt::from(0) {
            return Err(format!("zero denominator in {text:?}"));
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int_part, frac_part)) = text.split_once('.') {
        if frac_part.is_empty() || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(format!("bad decimal {text:?}"));
        }
        let negative = int_part.starts_with('-');
        let int_digits = int_part.strip_prefix(['-', '+']).unwrap_or(int_part);
        let whole: BigInt = if int_digits.is_empty() {
            BigInt::from(0)
        } else {
            int_digits
                .parse()
                .map_err(|_| format!("bad decimal {text:?}"))?
        };
        let frac: BigInt = frac_part.parse().expect("ascii digits");
        let scale = pow10(frac_part.len());
        let magnitude = whole * &scale + frac;
        let num = if negative { -magnitude } else { magnitude };
        return Ok(Rational::new(num, scale));
    }
    let num: BigInt = text.parse().map_err(|_| format!("bad number {text:?}"))?;
    Ok(Rational::new(num, BigInt::from(1)))
}

/// Parses a comma-separated list of photon counts; each entry is a single
/// value or an inclusive range "A..B".
///
/// # Errors
///
/// A message naming the malformed entry.
pub fn parse_u32_values(text: &str) -> Result<Vec<u32>, String> {
    let mut values = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        if let Some((start, end)) = part.split_once("..") {
            let start: u32 = start
                .trim()
                .parse()
                .map_err(|_| format!("bad range start in {part:?}"))?;
            let end: u32 = end
                .trim()
                .parse()
                .map_err(|_| format!("bad range end in {part:?}"))?;
            if end < start {
                return Err(format!("empty range {part:?}"));
            }
            values.extend(start..=end);
        } else {
            values.push(part.parse().map_err(|_| format!("bad count {part:?}"))?);
        }
    }
    if values.is_empty() {
        return Err("no counts given".to_string());
    }
    Ok(values)
}

/// Parses a phase flag: "0", "pi/2", "pi", "3pi/2" or free radians.
///
/// # Errors
///
/// A message listing the accepted forms.
pub fn parse_phase(text: &str) -> Result<Phase, String> {
    match text.trim() {
        "0" => Ok(Phase::Quarter(0)),
        "pi/2" => Ok(Phase::Quarter(1)),
        "pi" => Ok(Phase::Quarter(2)),
        "3pi/2" => Ok(Phase::Quarter(3)),
        other => other.parse::<f64>().map(Phase::Radians).map_err(|_| {
            format!("bad phase {other:?}: use 0, pi/2, pi, 3pi/2 or radians")
        }),
    }
}

/// Renders a phase the way the flag accepts it.
pub fn phase_token(phase: &Phase) -> String {
    match phase {
        Phase::Quarter(q) => match q % 4 {
            0 => "0",
            1 => "pi/2",
            2 => "pi",
            _ => "3pi/2",
        }
        .to_string(),
        Phase::Radians(r) => format!("{r}rad"),
    }
}

/// Exact decimal rendering when the denominator divides a power of ten,
/// shortest float rendering otherwise.
pub fn decimal_string(value: &Rational) -> String {
    let zero = BigInt::from(0);
    let negative = value.numer() < &zero;
    let magnitude = if negative {
        -value.numer().clone()
    } else {
        value.numer().clone()
    };
    // Split the denominator into 2^a · 5^b · rest.
    let mut rest = value.denom().clone();
    let (mut twos, mut fives) = (0u32, 0u32);
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    while &rest % &two == zero {
        rest = &rest / &two;
        twos += 1;
    }
    while &rest % &five == zero {
        rest = &rest / &five;
        fives += 1;
    }
    if rest != BigInt::from(1) {
        return format!("{}", value.to_f64());
    }
    let digits = twos.max(fives) as usize;
    let scaled = magnitude * pow10(digits) / value.denom();
    let sign = if negative && scaled != zero { "-" } else { "" };
    if digits == 0 {
        return format!("{sign}{scaled}");
    }
    let mut body = scaled.to_string();
    if body.len() <= digits {
        body = format!("{}{}", "0".repeat(digits + 1 - body.len()), body);
    }
    let point = body.len() - digits;
    format!("{sign}{}.{}", &body[..point], &body[point..])
}

fn pow10(digits: usize) -> BigInt {
    let mut value = BigInt::from(1);
    for _ in 0..digits {
        value *= 10;
    }
    value
}
