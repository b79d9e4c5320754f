//! `--config FILE` holds `key = value` lines; each key names a long flag of
//! the chosen subcommand. Flags given on the command line win.

use std::ffi::OsString;
use std::fs;

fn parse(text: &str) -> Result<Vec<(String, String)>, String> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| format!("config line {}: expected key = value", i + 1))?;
        out.push((k.trim().trim_start_matches("--").to_string(), v.trim().to_string()));
    }
    Ok(out)
}

pub fn merged_args(mut args: Vec<OsString>) -> Result<Vec<OsString>, String> {
    let strs: Vec<String> = args.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    let path = strs.iter().enumerate().find_map(|(i, a)| {
        if a == "--config" {
            strs.get(i + 1).cloned()
        } else {
            a.strip_prefix("--config=").map(str::to_string)
        }
    });
    let Some(path) = path else { return Ok(args) };
    let text = fs::read_to_string(&path).map_err(|e| format!("{path}: {e}"))?;
    for (k, v) in parse(&text)? {
        let flag = format!("--{k}");
        let given = strs.iter().any(|a| *a == flag || a.starts_with(&format!("{flag}=")));
        if given {
            continue;
        }
        match v.as_str() {
            "true" => args.push(flag.into()),
            "false" => {}
            _ => {
                args.push(flag.into());
                args.push(v.into());
            }
        }
    }
    Ok(args)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn comments_and_bad_lines() {
        let kv = parse("# code\nN = 64\n\n--t=2 # inline\n").unwrap();
        assert_eq!(kv, vec![("N".into(), "64".into()), ("t".into(), "2".into())]);
        assert!(parse("N 64").is_err());
    }
}
