#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hawkes/model.hpp"

namespace hawkes::cli {

// Model config files. The grammar is documented in tools/configs/README.md.
//
//   dim = 2
//   baseline = 0.05 0.1
//   [marks 1]
//   law = exponential
//   [kernel 0 1]
//   shape = exponential
//   amplitude = 0.08
//   decay = 0.2
//   mark_function = identity

/// Relative `file =` paths are resolved against base_dir.
HawkesModel read_model_config(std::istream& in, const std::string& source = "<stream>",
                              const std::filesystem::path& base_dir = {});

HawkesModel load_model_config(const std::filesystem::path& path);

/// Writes a config that reloads to the same model. Empirical mark laws are
/// stored next to the config as marks_<j>.txt.
void save_model_config(const std::filesystem::path& path, const HawkesModel& m);

}  // namespace hawkes::cli
