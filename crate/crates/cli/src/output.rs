//! Plain `key: value` text output with optional styling.

use std::io::IsTerminal;

pub struct Text {
    lines: Vec<(String, String)>,
    color: bool,
}

impl Text {
    pub fn new() -> Self {
        let disabled = std::env::var("DJ_COLOR").is_ok_and(|v| v == "0");
        Text {
            lines: Vec::new(),
            color: !disabled && std::io::stdout().is_terminal(),
        }
    }

    pub fn line(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.lines.push((key.into(), value.into()));
    }

    fn style(&self, value: &str) -> String {
        if !self.color {
            return value.to_string();
        }
        let head = value.split_whitespace().next().unwrap_or("");
        let code = match head {
            "pass" | "valid" | "yes" => "32",
            "fail" | "invalid" | "no" => "31",
            "inconclusive" => "33",
            _ => return value.to_string(),
        };
        format!("\x1b[{code}m{head}\x1b[0m{}", &value[head.len()..])
    }

    pub fn print(&self) {
        for (key, value) in &self.lines {
            println!("{key}: {}", self.style(value));
        }
    }
}

pub fn set<S: AsRef<str>>(names: &[S]) -> String {
    let inner: Vec<&str> = names.iter().map(|n| n.as_ref()).collect();
    format!("{{{}}}", inner.join(", "))
}

pub fn verdict(holds: bool) -> &'static str {
    if holds {
        "pass"
    } else {
        "fail"
    }
}

pub fn yes_no(value: bool) -> &'static str {
    if value {
        "yes"
    } else {
        "no"
    }
}
