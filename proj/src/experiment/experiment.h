// experiment/experiment.h

// Copyright 2026 The lfvctc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LFVCTC_EXPERIMENT_EXPERIMENT_H_
#define LFVCTC_EXPERIMENT_EXPERIMENT_H_

#include <string>

#include "corpus/synthetic.h"
#include "experiment/config.h"
#include "experiment/report.h"
#include "experiment/training.h"

namespace lfv {

// Corpus directory layout written by `gen-data`:
//   <dir>/features/<id>.mfcb
//   <dir>/<unit_mode>/{train,test,low_resource}.tsv
void write_corpus_dir(const std::string& dir, const SyntheticCorpus& corpus);
// Loads the manifests of both unit modes that exist under `dir`.
SyntheticCorpus read_corpus_dir(const std::string& dir);

// Generated from the config (per seed) or read from corpus.source.
SyntheticCorpus load_or_generate_corpus(const ExperimentConfig& config, std::uint64_t seed);

// Runs the grid and writes report.tsv, wer.tsv (when WER is enabled),
// report.txt, config.used and experiment.log into `out_dir`. A failure inside
// a cell marks that cell FAILED and the run continues.
ExperimentReport run_experiment(const ExperimentConfig& config, const std::string& out_dir,
                                const LogFn& log = {});

}  // namespace lfv

#endif  // LFVCTC_EXPERIMENT_EXPERIMENT_H_
