// Copyright 2026 The mlnet Authors. All Rights Reserved.
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

#pragma once

#include <iosfwd>

#include "mlnet/config.hpp"

namespace mlnet {

/// Process exit codes shared by every subcommand.
enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,
  kExitIterationCapped = 3,  // estimate: max_iters reached before delta0
};

// Each command is a pure function of (config, input files): outputs are
// written atomically under `out` and are byte-identical across re-runs and
// thread counts. Progress lines go to `log`.

/// out/P_true.bin, out/A.bin, out/latents.tsv, out/manifest.txt
int cmd_simulate(const RunConfig& cfg, std::ostream& log);
/// out/mask.bin, out/A_obs.bin, out/manifest.txt
int cmd_mask(const RunConfig& cfg, std::ostream& log);
/// out/P_hat.bin, out/trace.tsv, out/manifest.txt
int cmd_estimate(const RunConfig& cfg, std::ostream& log);
/// out/report.tsv, out/roc.tsv (when a mask is given), out/provenance.txt
int cmd_evaluate(const RunConfig& cfg, std::ostream& log);
/// out/scenario.tsv, out/replicates.tsv, out/manifest.txt
int cmd_scenario(const RunConfig& cfg, std::ostream& log);
/// out/A.bin from edge-list text
int cmd_ingest(const RunConfig& cfg, std::ostream& log);

}  // namespace mlnet
