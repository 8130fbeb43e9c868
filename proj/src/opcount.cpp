// Copyright 2026 The subarray-sic Authors
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

#include "sic/opcount.hpp"

namespace sic::opcount {
namespace {

thread_local Tally* activeTally = nullptr;
thread_local Part activePart = Part::Bookkeeping;

}  // namespace

std::string_view partName(Part part) {
  switch (part) {
    case Part::GramBuild: return "gram_build";
    case Part::PowerIteration: return "power_iteration";
    case Part::ClosedForm: return "closed_form";
    case Part::GramUpdate: return "gram_update";
    case Part::Bookkeeping: return "bookkeeping";
  }
  return "unknown";
}

std::uint64_t Tally::kernelMults() const {
  return multsIn(Part::GramBuild) + multsIn(Part::PowerIteration) + multsIn(Part::ClosedForm) +
         multsIn(Part::GramUpdate);
}

std::uint64_t Tally::kernelDivs() const {
  return divsIn(Part::GramBuild) + divsIn(Part::PowerIteration) + divsIn(Part::ClosedForm) +
         divsIn(Part::GramUpdate);
}

Recorder::Recorder(Tally& tally) : previous_(activeTally), previousPart_(activePart) {
  activeTally = &tally;
  activePart = Part::Bookkeeping;
}

Recorder::~Recorder() {
  activeTally = previous_;
  activePart = previousPart_;
}

PartScope::PartScope(Part part) : previous_(activePart) { activePart = part; }

PartScope::~PartScope() { activePart = previous_; }

void recordMultiply() {
  if (activeTally) ++activeTally->mults[static_cast<std::size_t>(activePart)];
}

void recordDivide() {
  if (activeTally) ++activeTally->divs[static_cast<std::size_t>(activePart)];
}

}  // namespace sic::opcount
