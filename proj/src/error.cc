// Copyright 2026 The pieceattack Authors.
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

#include "pieceattack/error.h"

namespace pieceattack {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "InvalidArgument";
    case ErrorCode::kIoError:
      return "IoError";
    case ErrorCode::kInvalidCorpus:
      return "InvalidCorpus";
    case ErrorCode::kVocabTooSmall:
      return "VocabTooSmall";
    case ErrorCode::kCorruptTokenization:
      return "CorruptTokenization";
    case ErrorCode::kDegenerateDataset:
      return "DegenerateDataset";
    case ErrorCode::kVictimUnavailable:
      return "VictimUnavailable";
    case ErrorCode::kMalformedResponse:
      return "MalformedResponse";
    case ErrorCode::kGeneratorUnavailable:
      return "GeneratorUnavailable";
    case ErrorCode::kEmbeddingParseError:
      return "EmbeddingParseError";
    case ErrorCode::kInsufficientData:
      return "InsufficientData";
  }
  return "Unknown";
}

}  // namespace pieceattack
