// flatspin: synthesize, verify and export flat timelike surface patches.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "flatspin/pipeline.hpp"

namespace fs = std::filesystem;
using namespace flatspin;

namespace {

constexpr const char* kPatchFile = "patch.json";
constexpr const char* kRefinedFile = "patch_refined.json";

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

nlohmann::json error_json(const Error& e) {
  static const char* names[] = {"input", "hypothesis", "numerical", "algebra"};
  return {{"class", names[static_cast<int>(e.error_class())]}, {"message", e.what()}};
}

int fail(const Error& e) {
  std::cerr << "flatspin: " << e.what() << '\n';
  return exit_code(e.error_class());
}

int cmd_synth(const std::string& config_path, const fs::path& out_dir, std::optional<std::size_t> refine_arg) {
  RunConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const Error& e) {
    return fail(e);
  }
  const std::size_t refine = refine_arg.value_or(cfg.refine);
  if (refine < 1) return fail(ConfigError("--refine must be at least 1"));
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return fail(ConfigError("cannot create '" + out_dir.string() + "': " + ec.message()));
  const fs::path report_path = out_dir / "report.json";
  nlohmann::json header{{"kind", seed_kind(cfg.seed)}, {"domain", to_json(cfg.dom)}, {"seed", to_json(cfg.seed)}};
  try {
    Run main = synthesize(cfg.seed, cfg.dom);
    std::optional<Run> fine;
    if (refine >= 2) fine = synthesize(cfg.seed, cfg.dom.refined(refine));
    const Assessment a =
        fine ? assess(main.report, fine->report, refine, shared_node_difference(main.patch, fine->patch, refine))
             : assess(main.report);
    write_text(out_dir / kPatchFile, patch_to_json(main.patch).dump() + "\n");
    if (fine) write_text(out_dir / kRefinedFile, patch_to_json(fine->patch).dump() + "\n");
    for (const std::string& f : cfg.formats) {
      std::ostringstream os;
      if (f == "csv") {
        write_csv(os, main.patch.F);
        write_text(out_dir / "patch.csv", os.str());
      } else if (f == "obj") {
        write_obj(os, cfg.dom, main.patch.F, cfg.projection, cfg.pole);
        write_text(out_dir / "patch.obj", os.str());
      }
    }
    nlohmann::json report = header;
    report.update(a.to_json());
    write_text(report_path, report.dump(2) + "\n");
    if (!a.passed()) {
      std::cerr << "flatspin: residual budgets exceeded; see " << report_path.string() << '\n';
      return 4;
    }
    return 0;
  } catch (const Error& e) {
    nlohmann::json report = header;
    report["passed"] = false;
    report["error"] = error_json(e);
    try {
      write_text(report_path, report.dump(2) + "\n");
    } catch (const Error&) {
    }
    return fail(e);
  }
}

int cmd_verify(const fs::path& dir) {
  const fs::path main_path = dir / kPatchFile;
  if (!fs::is_regular_file(main_path)) return fail(PatchFormatError("no " + std::string(kPatchFile) + " in '" + dir.string() + "'"));
  try {
    const StoredPatch main = read_patch(main_path);
    std::optional<StoredPatch> fine;
    std::size_t k = 1;
    if (fs::is_regular_file(dir / kRefinedFile)) {
      fine = read_patch(dir / kRefinedFile);
      k = (fine->dom.nx - 1) / (main.dom.nx - 1);
      if (!same_grid_family(main.dom, fine->dom, k) || to_json(main.seed) != to_json(fine->seed)) {
        throw PatchFormatError("refined patch does not refine the main patch");
      }
    }
    Report main_report = verify_stored(main);
    std::optional<Report> fine_report;
    std::optional<double> oracle;
    if (fine) {
      fine_report = verify_stored(*fine);
      oracle = shared_node_difference(main, *fine, k);
    }
    const Assessment a = assess(std::move(main_report), std::move(fine_report), k, oracle);
    nlohmann::json out{{"kind", seed_kind(main.seed)}, {"domain", to_json(main.dom)}};
    out.update(a.to_json());
    std::cout << out.dump(2) << '\n';
    return a.passed() ? 0 : 4;
  } catch (const Error& e) {
    return fail(e);
  }
}

int cmd_export(const fs::path& dir, const std::string& format, const std::string& projection,
               std::optional<double> pole, const std::string& out_path) {
  const auto proj = projection_from(projection);
  if (!proj) return fail(ConfigError("unknown projection '" + projection + "'"));
  if (format != "obj" && format != "csv" && format != "json") {
    return fail(ConfigError("unknown format '" + format + "'"));
  }
  const fs::path main_path = dir / kPatchFile;
  if (!fs::is_regular_file(main_path)) return fail(PatchFormatError("no " + std::string(kPatchFile) + " in '" + dir.string() + "'"));
  try {
    std::ostringstream os;
    if (format == "json") {
      std::ifstream in(main_path, std::ios::binary);
      os << in.rdbuf();
    } else {
      const StoredPatch p = read_patch(main_path);
      if (format == "csv") {
        write_csv(os, p.F);
      } else {
        write_obj(os, p.dom, p.F, *proj, pole);
      }
    }
    if (out_path.empty()) {
      std::cout << os.str();
    } else {
      write_text(out_path, os.str());
    }
    return 0;
  } catch (const Error& e) {
    return fail(e);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flat timelike surfaces in R^{3,1} and S^{2,1} from holomorphic seed data"};
  app.require_subcommand(1);

  std::string config;
  std::string out_dir;
  std::optional<std::size_t> refine;
  auto* synth = app.add_subcommand("synth", "Integrate a seed and write patch.json, exports and report.json");
  synth->add_option("--config", config, "JSON run configuration")->required();
  synth->add_option("--out", out_dir, "Output directory (created if missing)")->required();
  synth->add_option("--refine", refine, "Also run on a grid refined by this factor and report orders");

  std::string patch_dir;
  auto* verify = app.add_subcommand("verify", "Re-run the verification suite on a patch directory");
  verify->add_option("--patch", patch_dir, "Directory holding patch.json")->required();

  std::string format;
  std::string projection = "drop-x1";
  std::optional<double> pole;
  std::string export_out;
  auto* exp = app.add_subcommand("export", "Export a patch as obj, csv or json");
  exp->add_option("--patch", patch_dir, "Directory holding patch.json")->required();
  exp->add_option("--format", format, "obj | csv | json")->required();
  exp->add_option("--projection", projection,
                  "drop-x1 | drop-x4 | stereo; stereo maps (x2,x3,x4)/(a - x1) with pole a = max x1 + 1 "
                  "unless --pole is given");
  exp->add_option("--pole", pole, "x1 coordinate of the stereographic pole");
  exp->add_option("--out", export_out, "Output file (default: standard output)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (*synth) return cmd_synth(config, out_dir, refine);
  if (*verify) return cmd_verify(patch_dir);
  return cmd_export(patch_dir, format, projection, pole, export_out);
}
