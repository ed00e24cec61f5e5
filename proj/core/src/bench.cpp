#include "omt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "omt/errors.hpp"
#include "omt/problem_io.hpp"

namespace omt::bench {

std::string Config::name() const
{
    return std::string(algorithm_name(algorithm)) + "-" + strategy_name(strategy);
}

std::vector<Config> all_configs()
{
    return {{Algorithm::Offline, Strategy::Linear},
            {Algorithm::Offline, Strategy::Binary},
            {Algorithm::Inline, Strategy::Linear},
            {Algorithm::Inline, Strategy::Binary},
            {Algorithm::Inline, Strategy::Adaptive}};
}

Config parse_config(const std::string& name)
{
    for (const Config& c : all_configs())
        if (c.name() == name)
            return c;
    throw UsageError("unknown configuration '" + name + "' (expected offline-lin, offline-bin, inline-lin, "
                     "inline-bin or inline-ada)");
}

std::vector<std::filesystem::path> problem_files(const std::filesystem::path& dir)
{
    if (!std::filesystem::is_directory(dir))
        throw UsageError("not a directory: " + dir.string());
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".smt2")
            out.push_back(entry.path());
    std::sort(out.begin(), out.end());
    return out;
}

namespace {

Row run_one(const std::filesystem::path& file, const Config& config, const BenchOptions& options)
{
    Row row;
    row.file = file.filename().string();
    row.config = config.name();
    try {
        std::ifstream in(file);
        if (!in)
            throw UsageError("cannot read " + file.string());
        std::stringstream text;
        text << in.rdbuf();
        io::ProblemFile f = io::parse_problem(text.str());
        OmtProblem p = io::to_omt_problem(f);
        OmtOptions o;
        o.algorithm = config.algorithm;
        o.strategy = config.strategy;
        o.timeout = options.timeout;
        auto start = std::chrono::steady_clock::now();
        OmtResult r = options.solver ? options.solver(p, o) : solve(p, o);
        row.time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        io::RunReport report = io::make_report(f, p, r, o, 0, false);
        row.status = report.status;
        row.objective = report.objective + (report.strict ? " (strict)" : "");
        row.smt_calls = r.stats.smt_calls;
        row.minimize_calls = r.stats.minimize_calls;
    } catch (const std::exception& e) {
        row.status = "error";
        row.objective = "none";
        row.error = e.what();
    }
    return row;
}

} // namespace

BenchReport run_bench(const std::vector<std::filesystem::path>& files, const BenchOptions& options)
{
    std::vector<std::pair<std::size_t, std::size_t>> tasks;
    for (std::size_t f = 0; f < files.size(); ++f)
        for (std::size_t c = 0; c < options.configs.size(); ++c)
            tasks.emplace_back(f, c);
    std::vector<Row> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < tasks.size(); i = next++)
            rows[i] = run_one(files[tasks[i].first], options.configs[tasks[i].second], options);
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(options.jobs, static_cast<unsigned>(tasks.size())));
    std::vector<std::thread> pool;
    for (unsigned j = 1; j < jobs; ++j)
        pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool)
        t.join();

    BenchReport report;
    std::vector<std::size_t> order(rows.size());
    for (std::size_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return rows[a].file < rows[b].file; });
    for (std::size_t i : order)
        report.rows.push_back(rows[i]);

    for (std::size_t begin = 0; begin < report.rows.size();) {
        std::size_t end = begin;
        while (end < report.rows.size() && report.rows[end].file == report.rows[begin].file)
            ++end;
        std::map<std::string, std::vector<std::string>> answers;
        for (std::size_t i = begin; i < end; ++i) {
            const Row& r = report.rows[i];
            if (r.status != "unknown" && r.status != "error")
                answers[r.status + " " + r.objective].push_back(r.config);
        }
        if (answers.size() > 1) {
            // Rows outside the most common answer are flagged.
            auto majority = std::max_element(answers.begin(), answers.end(), [](const auto& a, const auto& b) {
                return a.second.size() < b.second.size();
            });
            std::string msg = report.rows[begin].file + ":";
            for (const auto& [answer, configs] : answers) {
                msg += " [" + answer + ":";
                for (const auto& c : configs)
                    msg += " " + c;
                msg += "]";
            }
            report.disagreements.push_back(msg);
            for (std::size_t i = begin; i < end; ++i) {
                Row& r = report.rows[i];
                if (r.status != "unknown" && r.status != "error" && r.status + " " + r.objective != majority->first)
                    r.agree = false;
            }
        }
        begin = end;
    }
    return report;
}

std::string format_table(const BenchReport& report)
{
    std::ostringstream out;
    out << "file\tconfig\tstatus\tobjective\ttime\tsmt_calls\tminimize_calls\tagree\n";
    for (const Row& r : report.rows) {
        out << r.file << "\t" << r.config << "\t" << r.status << "\t" << r.objective << "\t" << std::fixed
            << std::setprecision(3) << r.time << "\t" << r.smt_calls << "\t" << r.minimize_calls << "\t"
            << (r.agree ? "yes" : "NO") << "\n";
    }
    return out.str();
}

} // namespace omt::bench
