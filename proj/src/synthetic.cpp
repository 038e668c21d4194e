#include "cgoracle/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <stdexcept>

namespace cgoracle {
namespace {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1p-53; }
  std::size_t below(std::size_t n) {
    return std::min(n - 1, static_cast<std::size_t>(uniform() * static_cast<double>(n)));
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace

std::vector<RawEdge> generate_call_graph(const SyntheticSpec& spec) {
  std::vector<RawEdge> edges;
  if (spec.edges == 0) return edges;
  Rng rng(spec.seed);

  const auto n = std::max<std::size_t>(
      4, static_cast<std::size_t>(std::llround(static_cast<double>(spec.edges) /
                                               std::max(spec.mean_out_degree, 0.1))));
  const auto lib = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(static_cast<double>(n) * spec.library_fraction)), 2,
      n / 2);
  const auto module_size = std::max<std::size_t>(spec.module_size, 2);
  const auto files = std::clamp<std::size_t>(spec.files, 1, n);

  std::vector<std::string> names(n);
  names[0] = "kmalloc";
  for (std::size_t i = 1; i < lib; ++i) names[i] = "lib_" + std::to_string(i);
  for (std::size_t i = lib; i < n; ++i) {
    names[i] = "m" + std::to_string((i - lib) / module_size) + "_f" + std::to_string(i);
  }
  std::vector<std::string> file_of(n);
  for (std::size_t i = 0; i < n; ++i) {
    file_of[i] = "src/unit" + std::to_string(i * files / n) + ".c";
  }

  // kmalloc stays a leaf; other leaves are drawn per node.
  std::vector<std::size_t> callers;
  for (std::size_t i = 1; i < n; ++i) {
    if (rng.uniform() >= spec.leaf_fraction) callers.push_back(i);
  }
  if (callers.empty()) callers.push_back(n - 1);

  auto library_target = [&] {
    const double u = rng.uniform();
    return static_cast<std::size_t>(static_cast<double>(lib) * u * u * u);
  };

  edges.reserve(spec.edges);
  while (edges.size() < spec.edges) {
    const std::size_t caller = callers[rng.below(callers.size())];
    std::size_t callee;
    if (caller < lib) {
      const double u = rng.uniform();
      callee = static_cast<std::size_t>(static_cast<double>(caller) * u * u);
    } else {
      const std::size_t begin = lib + (caller - lib) / module_size * module_size;
      const std::size_t end = std::min(n, begin + module_size);
      const double pick = rng.uniform();
      if (pick < spec.library_call_fraction) {
        callee = library_target();
      } else if (pick < spec.library_call_fraction + spec.cycle_fraction && caller + 1 < end) {
        callee = caller + 1 + rng.below(end - caller - 1);
      } else if (caller > begin) {
        callee = begin + rng.below(caller - begin);
      } else {
        callee = library_target();
      }
    }
    const auto style = rng.uniform() < 0.1 ? EdgeStyle::dotted : EdgeStyle::solid;
    edges.push_back(RawEdge{names[caller], names[callee], style, file_of[caller]});
  }
  return edges;
}

std::size_t write_dump_files(const std::filesystem::path& dir, std::span<const RawEdge> edges) {
  std::map<std::string, std::vector<RawEdge>> by_file;
  for (const auto& e : edges) by_file[e.file].push_back(e);
  for (const auto& [tag, group] : by_file) {
    const auto path = dir / (tag + ".eg");
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << format_eg(group);
  }
  return by_file.size();
}

}  // namespace cgoracle
