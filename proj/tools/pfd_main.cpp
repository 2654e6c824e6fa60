#include "pfd/cli.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>

int main(int argc, char** argv) {
    using namespace pfd;
    CLI::App app{"Exact non-archimedean computations with verification reports"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    cli::JobSpec job;
    std::string format = "json";
    std::string prec, epsilon;
    std::int64_t p = 0, deg_cap = 0;
    int level = -1, h = -1, nmax = -1;
    for (const auto& name : cli::commands()) {
        CLI::App* sub = app.add_subcommand(name, name);
        sub->set_help_flag("--help", "print help");
        sub->add_option("--in", job.inputs, "input JSON file");
        sub->add_option("--out", job.out, "report path (stdout when absent)");
        sub->add_option("--p", p, "prime");
        sub->add_option("--level", level, "field level");
        sub->add_option("--prec", prec, "precision cap a/b");
        sub->add_option("--deg-cap", deg_cap, "degree bound");
        sub->add_option("--epsilon", epsilon, "valuation threshold a/b");
        sub->add_option("--seed", job.seed, "seed for generated corpora");
        sub->add_option("--h", h, "tower level or depth");
        sub->add_option("--nmax", nmax, "top cubical degree");
        sub->add_option("--kind", job.kind, "variant (cylinder: polynomial|constant)");
        sub->add_option("--format", format, "report format")->check(CLI::IsMember({"json"}));
        sub->add_flag("--timing", job.timing, "include wall time in the report");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : cli::ParseError;
    }
    job.command = app.get_subcommands().front()->get_name();
    try {
        if (p) job.p = p;
        if (level >= 0) job.level = level;
        if (!prec.empty()) job.prec = parse_rational(prec);
        if (deg_cap) job.deg_cap = deg_cap;
        if (!epsilon.empty()) job.epsilon = parse_rational(epsilon);
        if (h >= 0) job.h = h;
        if (nmax >= 0) job.nmax = nmax;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::ParseError;
    }
    cli::Report r = cli::run(job);
    if (r.exit_code == cli::ParseError) {
        std::cerr << "parse error: " << r.body["error"]["message"].get<std::string>() << "\n";
        return r.exit_code;
    }
    std::string text = cli::render(r);
    if (job.out) {
        std::ofstream out(*job.out, std::ios::binary);
        if (!out) {
            std::cerr << "cannot write " << *job.out << "\n";
            return cli::DomainError;
        }
        out << text;
    } else {
        std::cout << text;
    }
    return r.exit_code;
}
