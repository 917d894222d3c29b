use std::f64::consts::PI;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::series::{ScalingParams, SequenceSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<String>", into = "Vec<String>")]
pub struct Vocabulary {
    words: Vec<String>,
}

impl Vocabulary {
    pub fn new(words: Vec<String>) -> Result<Self> {
        if words.len() < 2 {
            return Err(Error::InvalidArgument("vocabulary needs at least 2 words".into()));
        }
        for (i, w) in words.iter().enumerate() {
            if words[..i].contains(w) {
                return Err(Error::InvalidArgument(format!("duplicate vocabulary word `{w}`")));
            }
        }
        Ok(Self { words })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.words.iter().position(|w| w == word)
    }

    /// `π (i + 1) / (V + 1)`, strictly inside `(0, π)`.
    pub fn angle_of(&self, word: &str) -> Result<f64> {
        let i = self
            .index_of(word)
            .ok_or_else(|| Error::OutOfVocabulary(word.to_string()))?;
        Ok(PI * (i + 1) as f64 / (self.words.len() + 1) as f64)
    }
}

impl TryFrom<Vec<String>> for Vocabulary {
    type Error = Error;

    fn try_from(words: Vec<String>) -> Result<Self> {
        Vocabulary::new(words)
    }
}

impl From<Vocabulary> for Vec<String> {
    fn from(v: Vocabulary) -> Self {
        v.words
    }
}

/// Angles of each word of a sentence.
pub fn encode_sentence(words: &[String], vocab: &Vocabulary) -> Result<Vec<f64>> {
    words.iter().map(|w| vocab.angle_of(w)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sentence {
    pub words: Vec<String>,
    pub label: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentenceSample {
    pub word_angles: Vec<f64>,
    pub label: u8,
}

/// Labelled sentences and their vocabulary; the JSON file format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Corpus {
    pub vocab: Vocabulary,
    pub sentences: Vec<Sentence>,
}

impl Corpus {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let corpus: Corpus = serde_json::from_str(&text)?;
        corpus.validate()?;
        Ok(corpus)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn validate(&self) -> Result<()> {
        for s in &self.sentences {
            if s.label > 1 {
                return Err(Error::InvalidArgument(format!("label {} is not 0 or 1", s.label)));
            }
            if s.words.is_empty() {
                return Err(Error::Empty("sentence"));
            }
            encode_sentence(&s.words, &self.vocab)?;
        }
        Ok(())
    }

    pub fn samples(&self) -> Result<Vec<SentenceSample>> {
        self.sentences
            .iter()
            .map(|s| {
                Ok(SentenceSample {
                    word_angles: encode_sentence(&s.words, &self.vocab)?,
                    label: s.label,
                })
            })
            .collect()
    }

    /// Word angles as inputs, labels as targets on the unit scale.
    pub fn to_sequences(&self) -> Result<SequenceSet> {
        let samples = self.samples()?;
        SequenceSet::new(
            samples.iter().map(|s| s.word_angles.clone()).collect(),
            samples.iter().map(|s| s.label as f64).collect(),
            ScalingParams::unit(),
        )
    }
}

const SUBJECTS: [&str; 3] = ["man", "woman", "person"];
const SHARED_ADJ: &str = "skillful";
const SHARED_VERB: &str = "prepares";
const FOOD_VERBS: [&str; 2] = ["cooks", "bakes"];
const FOOD_ADJ: &str = "tasty";
const FOOD_OBJECTS: [&str; 3] = ["dinner", "meal", "sauce"];
const IT_VERBS: [&str; 2] = ["debugs", "runs"];
const IT_ADJ: &str = "useful";
const IT_OBJECTS: [&str; 3] = ["program", "application", "software"];

/// Number of sentences per class in the synthetic corpus.
pub const MC_PER_CLASS: usize = 65;

fn class_sentences(verbs: &[&str], adj: &str, objects: &[&str]) -> Vec<Vec<String>> {
    let verbs: Vec<&str> = verbs.iter().copied().chain([SHARED_VERB]).collect();
    let mut out = Vec::new();
    for subj in SUBJECTS {
        for verb in &verbs {
            for obj in objects {
                let own = |ws: &[&str]| ws.iter().map(|w| w.to_string()).collect::<Vec<_>>();
                out.push(own(&[subj, verb, obj]));
                out.push(own(&[SHARED_ADJ, subj, verb, obj]));
                out.push(own(&[subj, verb, adj, obj]));
            }
        }
    }
    out
}

/// Food-vs-IT sentence classification corpus: 130 sentences of 3 or 4 words
/// over 17 words, 65 per class (food = 0, IT = 1), shuffled by `seed`.
///
/// Subjects, `skillful` and `prepares` occur in both classes.
pub fn synth_mc_corpus(seed: u64) -> Corpus {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut vocab: Vec<String> = SUBJECTS.iter().map(|s| s.to_string()).collect();
    vocab.extend([SHARED_ADJ, SHARED_VERB].map(String::from));
    vocab.extend(FOOD_VERBS.iter().chain([&FOOD_ADJ]).chain(&FOOD_OBJECTS).map(|s| s.to_string()));
    vocab.extend(IT_VERBS.iter().chain([&IT_ADJ]).chain(&IT_OBJECTS).map(|s| s.to_string()));

    let mut sentences = Vec::with_capacity(2 * MC_PER_CLASS);
    for (label, (verbs, adj, objects)) in [
        (&FOOD_VERBS, FOOD_ADJ, &FOOD_OBJECTS),
        (&IT_VERBS, IT_ADJ, &IT_OBJECTS),
    ]
    .into_iter()
    .enumerate()
    {
        let mut pool = class_sentences(verbs, adj, objects);
        pool.shuffle(&mut rng);
        sentences.extend(pool.into_iter().take(MC_PER_CLASS).map(|words| Sentence {
            words,
            label: label as u8,
        }));
    }
    sentences.shuffle(&mut rng);
    Corpus {
        vocab: Vocabulary::new(vocab).expect("static vocabulary is unique"),
        sentences,
    }
}
