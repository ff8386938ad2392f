// Command-line front end: analyze | spectrum | impulse | transfer | bounds.
// Exit codes: 0 success, 1 configuration/validation error, 2 numerical failure.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diffhank/diffhank.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw diffhank::ConfigError("--config", "cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw diffhank::ConfigError("--out", "cannot write '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace diffhank;
  CLI::App app{"diffhank: diffusive systems and weighted Hankel operators"};
  app.require_subcommand(1);

  std::string config_path, out_path, times_arg, points_arg;
  int top = 10, degree = -1;
  bool sweep = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON job configuration")->required();
    sub->add_option("--out", out_path, "write the primary output here instead of stdout");
  };
  auto* analyze = app.add_subcommand("analyze", "classify the weighted Hankel operator");
  add_common(analyze);
  auto* spectrum = app.add_subcommand("spectrum", "singular values of the discretized operator");
  add_common(spectrum);
  spectrum->add_option("--top", top, "number of singular values to print");
  spectrum->add_flag("--sweep", sweep, "add the range-refinement growth diagnostic");
  auto* impulse = app.add_subcommand("impulse", "sample the impulse response h(t)");
  add_common(impulse);
  impulse->add_option("--times", times_arg, "comma-separated t > 0");
  auto* transfer = app.add_subcommand("transfer", "sample the transfer function G(s)");
  add_common(transfer);
  transfer->add_option("--points", points_arg, "comma-separated s with Re s > 0, e.g. 1,2+1i");
  auto* bounds = app.add_subcommand("bounds", "model-reduction error bounds for degree k");
  add_common(bounds);
  bounds->add_option("--degree", degree, "approximation degree k >= 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    const auto cfg = parse_config(read_file(config_path));
    if (*analyze) {
      const auto out = cmd_analyze(cfg);
      emit(out.primary, out_path);
      (out_path.empty() ? std::cerr : std::cout) << out.secondary;
    } else if (*spectrum) {
      SpectrumOptions opt;
      if (spectrum->count("--top") == 0 && cfg.top) top = *cfg.top;
      if (top < 1) throw std::invalid_argument("--top must be >= 1");
      opt.top = static_cast<std::size_t>(top);
      opt.sweep = sweep;
      const auto out = cmd_spectrum(cfg, opt);
      emit(out.primary, out_path);
      std::cerr << out.secondary;
    } else if (*impulse) {
      std::vector<double> times = cfg.times;
      if (!times_arg.empty()) {
        times.clear();
        for (const auto& s : split_list(times_arg)) {
          std::size_t used = 0;
          const double t = std::stod(s, &used);
          if (used != s.size()) throw std::invalid_argument("cannot parse time '" + s + "'");
          times.push_back(t);
        }
      }
      if (times.empty()) throw std::invalid_argument("no times given (--times or config 'times')");
      emit(cmd_impulse(cfg, times).primary, out_path);
    } else if (*transfer) {
      std::vector<complex> points = cfg.points;
      if (!points_arg.empty()) {
        points.clear();
        for (const auto& s : split_list(points_arg)) points.push_back(parse_complex(s));
      }
      if (points.empty())
        throw std::invalid_argument("no points given (--points or config 'points')");
      emit(cmd_transfer(cfg, points).primary, out_path);
    } else if (*bounds) {
      if (bounds->count("--degree") == 0 && cfg.degree) degree = *cfg.degree;
      if (degree < 0) throw std::invalid_argument("--degree must be given and >= 0");
      emit(cmd_bounds(cfg, static_cast<std::size_t>(degree)).primary, out_path);
    }
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
