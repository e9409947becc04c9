#pragma once

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "engine.hpp"
#include "parser.hpp"
#include "printer.hpp"
#include "selftest.hpp"
#include "transpiler.hpp"

namespace mup::cli {

inline std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Program load_program(const std::string &path) {
    try {
        return parse_program(read_file(path));
    } catch (const SyntaxError &e) {
        throw Error(path + ":" + e.what());
    }
}

inline std::string trim(std::string s) {
    auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos)
        return "";
    auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

struct GlobalFlags {
    std::string commit = "soft";
    bool occurs_check = false;
    std::optional<std::size_t> depth_limit;
    std::optional<std::size_t> max_solutions;
    bool trace = false;
    std::string unknown = "error";

    SolveConfig config() const {
        SolveConfig cfg;
        cfg.commit_mode = commit == "first" ? CommitMode::First : CommitMode::Soft;
        cfg.occurs_check = occurs_check;
        cfg.depth_limit = depth_limit;
        cfg.max_solutions = max_solutions;
        cfg.unknown_predicate = unknown == "fail" ? UnknownPredicate::Fail : UnknownPredicate::Error;
        return cfg;
    }
};

// Console ports that remember whether output ended mid-line, so a solution
// line never gets glued to text printed by write/1.
struct ConsolePorts {
    std::shared_ptr<bool> mid_line = std::make_shared<bool>(false);
    IoPorts io;

    ConsolePorts(std::istream &in, std::ostream &out) : io(IoPorts::streams(in, out)) {
        io.write = [&out, flag = mid_line](std::string_view s) {
            out << s << std::flush;
            if (!s.empty())
                *flag = s.back() != '\n';
        };
    }

    void line(std::ostream &out, const std::string &text) {
        if (*mid_line)
            out << "\n";
        *mid_line = false;
        out << text << "\n" << std::flush;
    }
};

inline TraceSink trace_to(std::ostream &err) {
    return [&err](const TraceEvent &e) { err << e.to_line() << "\n"; };
}

// Batch mode: every solution on its own line, `false.` when there are none.
inline int run_batch(const std::string &file, const std::string &query, const GlobalFlags &flags, std::istream &in,
                     std::ostream &out, std::ostream &err) {
    try {
        Program p = load_program(file);
        Query q = parse_query(query, {}, p.var_ceiling());
        ConsolePorts console(in, out);
        SolutionStream s = solve(p, q, flags.config(), console.io, flags.trace ? trace_to(err) : TraceSink{});
        std::size_t n = 0;
        while (auto sol = s.next()) {
            console.line(out, format_solution(*sol));
            ++n;
        }
        if (n == 0)
            console.line(out, "false.");
        if (s.depth_limit_hit())
            err << "% warning: depth limit reached; the search was cut off\n";
        return n > 0 ? 0 : 1;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

//
// Interactive loop. Queries may span several lines and end with `.`; after
// each solution a line `;` asks for the next one, `.` or an empty line stops.
// read/1 consumes the same input stream.
//
class Repl {
public:
    Repl(GlobalFlags flags, std::istream &in, std::ostream &out, std::ostream &err)
        : flags_(std::move(flags)), in_(in), out_(out), err_(err) {}

    void load(const std::string &path) {
        program_.append(load_program(path));
        out_ << "% loaded " << path << "\n";
    }

    int loop() {
        std::optional<std::string> pending;
        while (true) {
            std::string text;
            if (pending) {
                text = std::move(*pending);
                pending.reset();
            } else {
                out_ << "?- " << std::flush;
                auto t = read_query();
                if (!t)
                    return 0;
                text = std::move(*t);
            }
            if (text.empty())
                continue;
            if (text[0] == ':') {
                if (!directive(text))
                    return 0;
                continue;
            }
            pending = run(text);
        }
    }

private:
    std::optional<std::string> read_query() {
        std::string text, line;
        while (std::getline(in_, line)) {
            text += (text.empty() ? "" : "\n") + line;
            std::string t = trim(text);
            if (t.empty())
                return std::string();
            if (t.back() == '.')
                return t;
        }
        if (trim(text).empty())
            return std::nullopt;
        return trim(text);
    }

    // Returns false on :quit.
    bool directive(const std::string &text) {
        std::string body = trim(text.substr(1));
        if (!body.empty() && body.back() == '.')
            body = trim(body.substr(0, body.size() - 1));
        auto space = body.find_first_of(" \t");
        std::string cmd = body.substr(0, space);
        std::string arg = space == std::string::npos ? "" : trim(body.substr(space));
        try {
            if (cmd == "quit")
                return false;
            if (cmd == "load") {
                if (arg.size() >= 2 && (arg.front() == '\'' || arg.front() == '"') && arg.back() == arg.front())
                    arg = arg.substr(1, arg.size() - 2);
                if (arg.empty())
                    throw Error("usage: :load <file>.");
                load(arg);
            } else if (cmd == "trace" && (arg == "on" || arg == "off")) {
                flags_.trace = arg == "on";
                out_ << "% trace " << arg << "\n";
            } else if (cmd == "commit" && (arg == "soft" || arg == "first")) {
                flags_.commit = arg;
                out_ << "% commit " << arg << "\n";
            } else {
                throw Error("unknown directive ':" + body + "' (try :load, :trace, :commit or :quit)");
            }
        } catch (const Error &e) {
            out_ << "error: " << e.what() << "\n";
        }
        return true;
    }

    // Runs one query; returns an input line that ended enumeration but is
    // itself the next query.
    std::optional<std::string> run(const std::string &text) {
        try {
            Query q = parse_query(text, {}, program_.var_ceiling());
            ConsolePorts console(in_, out_);
            SolutionStream s = solve(program_, q, flags_.config(), console.io,
                                     flags_.trace ? trace_to(err_) : TraceSink{});
            while (auto sol = s.next()) {
                console.line(out_, format_solution(*sol));
                std::string reply;
                if (!std::getline(in_, reply))
                    return std::nullopt;
                reply = trim(reply);
                if (reply == ";")
                    continue;
                if (reply.empty() || reply == ".")
                    return std::nullopt;
                return reply;
            }
            console.line(out_, "false.");
            if (s.depth_limit_hit())
                out_ << "% depth limit reached; the search was cut off\n";
        } catch (const Error &e) {
            out_ << "error: " << e.what() << "\n";
        }
        return std::nullopt;
    }

    Program program_;
    GlobalFlags flags_;
    std::istream &in_;
    std::ostream &out_;
    std::ostream &err_;
};

//
// Entry point shared by the `mup` executable and the tests. Exit codes:
// 0 success (run: at least one solution), 1 no solutions or failed checks,
// 2 usage or runtime error.
//
inline int main(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err) {
    CLI::App app{"Prolog with committed-choice disjunction (#)", "mup"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags flags;
    app.add_option("--commit", flags.commit, "Choice commit mode")->check(CLI::IsMember({"soft", "first"}));
    app.add_flag("--occurs-check", flags.occurs_check, "Enable the occurs check in unification");
    app.add_option("--depth-limit", flags.depth_limit, "Bound on nested backchaining steps")
        ->envname("MUP_DEPTH_LIMIT")
        ->check(CLI::PositiveNumber);
    app.add_option("--max-solutions", flags.max_solutions, "Stop after this many solutions")
        ->check(CLI::PositiveNumber);
    app.add_flag("--trace", flags.trace, "Write trace events to the error stream");
    app.add_option("--unknown", flags.unknown, "Calls to undefined predicates")
        ->check(CLI::IsMember({"error", "fail"}));

    auto *run = app.add_subcommand("run", "Run one query against a program");
    std::string run_file, run_query;
    run->add_option("file", run_file, "Program file")->required();
    run->add_option("-q,--query", run_query, "Query, terminated by '.'")->required();

    auto *repl = app.add_subcommand("repl", "Interactive top level");
    std::vector<std::string> repl_files;
    repl->add_option("files", repl_files, "Programs to load");

    auto *tr = app.add_subcommand("translate", "Compile # away into plain Prolog");
    std::string tr_in, tr_out, tr_mode = "hard";
    tr->add_option("input", tr_in, "Program file")->required();
    tr->add_option("-o,--output", tr_out, "Output file (default: standard output)");
    tr->add_option("--mode", tr_mode, "hard: cut per choice, soft: soft-cut per choice")
        ->check(CLI::IsMember({"hard", "soft"}));

    auto *st = app.add_subcommand("selftest", "Differential test against the reference search");
    SelftestOptions st_opts;
    st->add_option("--seed", st_opts.seed, "Generator seed");
    st->add_option("--cases", st_opts.cases, "Random cases to check");
    st->add_option("--depth", st_opts.depth, "Depth bound")->check(CLI::PositiveNumber);
    st->add_option("--budget", st_opts.budget, "Reference search steps per query");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << "\n" << app.help();
        return 2;
    }

    if (*run)
        return run_batch(run_file, run_query, flags, in, out, err);

    if (*repl) {
        Repl r(flags, in, out, err);
        for (const auto &f : repl_files) {
            try {
                r.load(f);
            } catch (const Error &e) {
                err << "error: " << e.what() << "\n";
                return 2;
            }
        }
        return r.loop();
    }

    if (*tr) {
        try {
            Program p = load_program(tr_in);
            std::string text = translate(p, tr_mode == "soft" ? CutMode::SoftCut : CutMode::HardCut,
                                         std::filesystem::path(tr_in).filename().string());
            if (tr_out.empty()) {
                out << text;
            } else {
                std::ofstream f(tr_out, std::ios::binary);
                if (!f)
                    throw Error("cannot write '" + tr_out + "'");
                f << text;
            }
            return 0;
        } catch (const Error &e) {
            err << "error: " << e.what() << "\n";
            return 2;
        }
    }

    SelftestReport rep = run_selftest(st_opts);
    out << rep.summary();
    for (const auto &c : rep.counterexamples)
        out << "\n" << c;
    return rep.ok() ? 0 : 1;
}

} // namespace mup::cli
