//! Series loading, scaling, windowing and the sentence corpus.

mod series;
mod synth;
mod text;

pub use series::{
    chronological_split, fit_scaling, load_series_csv, make_windows, prepare_regression, RawSeries,
    ScalingParams, SequenceSet, WindowSample, WindowedDataset,
};
pub use synth::{synth_series, SynthKind, SynthSpec};
pub use text::{
    encode_sentence, synth_mc_corpus, Corpus, Sentence, SentenceSample, Vocabulary, MC_PER_CLASS,
};
