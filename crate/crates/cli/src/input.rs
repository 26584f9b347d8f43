//! Reading sequences from files or stdin.

use std::fs;
use std::io::{self, Read};

use clap::ValueEnum;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Raw bytes; byte `v` becomes symbol `v + 1` over an alphabet of 256.
    Bytes,
    /// Whitespace-separated decimal integers, each at least 1.
    Ints,
}

/// Reads the whole input; `-` is stdin.
pub fn read_input(path: &str) -> Result<Vec<u8>, CliError> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin()
            .read_to_end(&mut buf)
            .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
        Ok(buf)
    } else {
        fs::read(path).map_err(|e| CliError::Io(format!("{path}: {e}")))
    }
}

/// Symbols and alphabet size. For integer input the alphabet defaults to
/// the largest value present.
pub fn parse(data: &[u8], format: Format, sigma: Option<usize>) -> Result<(Vec<usize>, usize), CliError> {
    let (symbols, natural) = match format {
        Format::Bytes => (data.iter().map(|&b| b as usize + 1).collect::<Vec<_>>(), 256),
        Format::Ints => {
            let text = std::str::from_utf8(data).map_err(|_| CliError::Usage("integer input is not UTF-8".into()))?;
            let mut out = Vec::new();
            for (idx, tok) in text.split_whitespace().enumerate() {
                let v: usize = tok.parse().map_err(|_| {
                    CliError::Usage(format!("token {} ({tok:?}) is not a non-negative integer", idx + 1))
                })?;
                if v == 0 {
                    return Err(CliError::Usage(format!("token {} is 0; symbols start at 1", idx + 1)));
                }
                out.push(v);
            }
            let max = out.iter().copied().max().unwrap_or(1);
            (out, max)
        }
    };
    let sigma = sigma.unwrap_or(natural);
    if sigma == 0 {
        return Err(CliError::Usage("--sigma must be at least 1".into()));
    }
    if let Some(max) = symbols.iter().copied().max().filter(|&m| m > sigma) {
        return Err(CliError::Usage(format!("symbol {max} exceeds --sigma {sigma}")));
    }
    Ok((symbols, sigma))
}
