//! Ordered `key = value` text records.

use std::fmt::Display;

use ball_core::{BallComplex, BallReal};

use crate::PipelineError;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Record {
    entries: Vec<(String, String)>,
}

impl Record {
    pub fn new() -> Self {
        Record::default()
    }

    /// Blank lines and `#` comments are skipped; values keep inner spaces.
    pub fn parse(text: &str) -> Result<Self, PipelineError> {
        let mut entries = Vec::new();
        for line in text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
        {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| PipelineError::Record(line.to_string()))?;
            entries.push((k.trim().to_string(), v.trim().to_string()));
        }
        Ok(Record { entries })
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Display) -> &mut Self {
        self.entries.push((key.into(), value.to_string()));
        self
    }

    pub fn extend(&mut self, other: &Record) {
        self.entries.extend(other.entries.iter().cloned());
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    /// Last value for `key`.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn require(&self, key: &str) -> Result<&str, PipelineError> {
        self.get(key)
            .ok_or_else(|| PipelineError::Record(format!("missing `{key}`")))
    }

    pub fn parse_value<T: std::str::FromStr>(&self, key: &str) -> Result<T, PipelineError> {
        let v = self.require(key)?;
        v.parse()
            .map_err(|_| PipelineError::Record(format!("`{key}` = {v}")))
    }

    pub fn ball(&self, key: &str, prec: u32) -> Result<BallReal, PipelineError> {
        Ok(BallReal::parse(self.require(key)?, prec)?)
    }

    /// `None` for the literal `none`.
    pub fn complex(&self, key: &str, prec: u32) -> Result<Option<BallComplex>, PipelineError> {
        match self.require(key)? {
            "none" => Ok(None),
            v => Ok(Some(BallComplex::parse_text(v, prec)?)),
        }
    }

    pub fn to_text(&self) -> String {
        self.entries
            .iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }
}
