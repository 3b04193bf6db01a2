#include <iostream>

#include "kantorovich/cli.hpp"
#include "kantorovich/experiment.hpp"

int main(int argc, char** argv) {
  using namespace kantorovich;
  ExperimentConfig config;
  try {
    config = parse_cli(argc, argv);
  } catch (const HelpRequested& help) {
    std::cout << help.what();
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "usage error: " << e.what() << "\n(run with --help for usage)\n";
    return 2;
  }

  try {
    switch (config.command) {
      case Command::Compare: {
        const CompareResult result = run_compare(config);
        for (const std::string& f : result.pointwise_files) std::cout << "wrote " << f << '\n';
        std::cout << "wrote " << config.output_path << " (" << result.rows.size() << " metric rows)\n";
        break;
      }
      case Command::Converge: {
        const auto rows = run_convergence(config);
        for (const ResultRow& r : rows) {
          std::cout << r.signal << ' ' << r.op << " w=" << r.w << ' ' << r.metric << " = " << format_real(r.value)
                    << '\n';
        }
        std::cout << "wrote " << config.output_path << '\n';
        break;
      }
      case Command::Diagnose: {
        const DiagnoseReport report = run_diagnose(config);
        std::cout << report.text << "wrote " << config.output_path << '\n';
        break;
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
