use std::fs::File;
use std::io::{self, Read};
use std::path::Path;

use anyhow::Context;
use freqlaw::ingest::tokenize_and_count;
use freqlaw::{CorpusConfig, SpeciesCounts};

use crate::{GlobalArgs, InputKind};

fn open(path: &Path) -> anyhow::Result<Box<dyn Read>> {
    if path.as_os_str() == "-" {
        return Ok(Box::new(io::stdin().lock()));
    }
    let f = File::open(path).with_context(|| format!("cannot read {}", path.display()))?;
    Ok(Box::new(io::BufReader::new(f)))
}

/// Reads `species,count` rows; `#` lines are comments.
fn read_counts_csv(reader: impl Read) -> anyhow::Result<SpeciesCounts> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut pairs = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let record = record?;
        let (Some(species), Some(count)) = (record.get(0), record.get(1)) else {
            anyhow::bail!("counts row {} needs species,count", i + 1);
        };
        let count: u64 = count
            .trim()
            .parse()
            .with_context(|| format!("counts row {}: bad count {count:?}", i + 1))?;
        pairs.push((species.to_owned(), count));
    }
    Ok(SpeciesCounts::from_pairs(pairs)?)
}

pub fn load_counts(path: &Path, global: &GlobalArgs) -> anyhow::Result<SpeciesCounts> {
    let reader = open(path)?;
    let config = CorpusConfig {
        tokenizer: global.tokenizer.into(),
        lowercase: global.lowercase,
        min_count: global.min_count,
    };
    let context = || format!("reading {}", path.display());
    match global.input {
        InputKind::Text => Ok(tokenize_and_count(reader, &config).with_context(context)?),
        InputKind::Counts => {
            let mut counts = read_counts_csv(reader).with_context(context)?;
            if global.min_count > 1 {
                counts.retain_min_count(global.min_count);
            }
            Ok(counts)
        }
    }
}
