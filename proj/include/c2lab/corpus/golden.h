#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace c2lab {

/// A pinned regression case: a preset scenario (seed fixed in the file), an
/// optional sweep over it, and the CSV a run must reproduce byte for byte.
struct GoldenCase {
  std::string id;
  std::string scenario;  // path relative to the repository root
  std::optional<std::string> sweep_key;
  std::vector<std::string> sweep_values;
};

/// The shipped cases, one per preset experiment (the target/interval preset
/// contributes one per swept parameter).
const std::vector<GoldenCase>& GoldenCases();

/// Throws std::invalid_argument for an unknown id.
const GoldenCase& FindGoldenCase(const std::string& id);

class GoldenMissing : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string GoldenPath(const std::string& root, const std::string& id);

/// Runs the case from scratch and renders its CSV: the metrics CSV for a
/// single run, the collated sweep CSV otherwise. `seed` overrides the
/// scenario's pinned seed.
std::string RenderGoldenCsv(const GoldenCase& c, const std::string& root,
                            std::optional<std::uint64_t> seed = std::nullopt);

struct GoldenResult {
  bool pass = false;
  std::string diff;  // first differing lines when !pass
};

/// Byte-compares a fresh run against golden/<id>.csv. Throws GoldenMissing if
/// the golden file does not exist.
GoldenResult VerifyGolden(const std::string& id, const std::string& root,
                          std::optional<std::uint64_t> seed = std::nullopt);

/// Regenerates golden/<id>.csv and logs what changed to `log`.
void RefreshGolden(const std::string& id, const std::string& root, std::ostream& log);

}  // namespace c2lab
