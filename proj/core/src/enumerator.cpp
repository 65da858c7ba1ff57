// Copyright 2026 The upsum Authors
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

#include "upsum/enumerator.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace upsum {

void ExploreBudget::validate() const {
    if (max_len < 1 || max_steps < 1) {
        throw std::invalid_argument("explore budget needs max_len >= 1 and max_steps >= 1");
    }
}

unsigned resolve_workers(unsigned requested) {
    if (requested > 0) {
        return requested;
    }
    if (const char *env = std::getenv("UPSUM_WORKERS"); env != nullptr && *env != '\0') {
        char *end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0 && v <= 4096) {
            return static_cast<unsigned>(v);
        }
        throw std::invalid_argument("UPSUM_WORKERS must be a positive integer, got '" +
                                    std::string(env) + "'");
    }
    return std::max(1U, std::thread::hardware_concurrency());
}

namespace {

// Exact sum of count_d * 2^-d.
DyadicRational mass_from_counts(const std::vector<std::uint64_t> &counts) {
    if (counts.empty()) {
        return {};
    }
    const std::size_t top = counts.size() - 1;
    mpz_class num;
    for (std::size_t d = 0; d < counts.size(); ++d) {
        if (counts[d] != 0) {
            num += mpz_class(static_cast<unsigned long>(counts[d]))
                   << static_cast<mp_bitcnt_t>(top - d);
        }
    }
    return DyadicRational(std::move(num), top);
}

struct Tally {
    std::vector<HaltingRecord> records;
    std::vector<std::uint64_t> unresolved; // by depth

    void add_unresolved(std::size_t depth) {
        if (unresolved.size() <= depth) {
            unresolved.resize(depth + 1, 0);
        }
        ++unresolved[depth];
    }

    void merge(Tally &&other) {
        records.insert(records.end(), std::make_move_iterator(other.records.begin()),
                       std::make_move_iterator(other.records.end()));
        if (unresolved.size() < other.unresolved.size()) {
            unresolved.resize(other.unresolved.size(), 0);
        }
        for (std::size_t d = 0; d < other.unresolved.size(); ++d) {
            unresolved[d] += other.unresolved[d];
        }
    }
};

HaltingRecord make_record(MachineState &&s) {
    HaltingRecord r;
    r.measure = DyadicRational::pow2_neg(s.tape.size());
    r.phase = PhaseFraction(bits_to_dyadic(s.out));
    r.program = std::move(s.tape);
    r.output = std::move(s.out);
    r.steps = s.steps;
    return r;
}

class Explorer {
  public:
    Explorer(const ExploreBudget &budget, const InstructionSet &isa,
             const std::map<BitString, const HaltingRecord *> &reuse)
        : budget_(budget), exec_(isa), reuse_(reuse) {}

    // Children of a node waiting on its next bit: closed ones are tallied,
    // open ones are returned.
    void expand(MachineState &&node, Tally &tally, std::vector<MachineState> &open) const {
        const std::size_t depth = node.tape.size();
        if (depth >= budget_.max_len) {
            tally.add_unresolved(depth);
            return;
        }
        MachineState zero = node;
        zero.tape.push_back(false);
        node.tape.push_back(true);
        for (MachineState *child : {&zero, &node}) {
            if (!reuse_.empty()) {
                if (auto it = reuse_.find(child->tape); it != reuse_.end()) {
                    tally.records.push_back(*it->second);
                    continue;
                }
            }
            switch (exec_.advance(*child, budget_.max_steps)) {
            case Stop::Halted:
                tally.records.push_back(make_record(std::move(*child)));
                break;
            case Stop::OutOfGas:
                tally.add_unresolved(depth + 1);
                break;
            case Stop::NeedBit:
                open.push_back(std::move(*child));
                break;
            }
        }
    }

    void exhaust(MachineState &&node, Tally &tally) const {
        std::vector<MachineState> open;
        open.push_back(std::move(node));
        while (!open.empty()) {
            MachineState next = std::move(open.back());
            open.pop_back();
            expand(std::move(next), tally, open);
        }
    }

    [[nodiscard]] const Executor &executor() const { return exec_; }

  private:
    ExploreBudget budget_;
    Executor exec_;
    const std::map<BitString, const HaltingRecord *> &reuse_;
};

// Fixed so the task split, and hence every intermediate, is independent of
// the worker count.
constexpr std::size_t kFrontierTasks = 512;

ExplorationReport run_exploration(const ExploreBudget &budget, Dialect dialect,
                                  const BitString &prefix, const ExploreOptions &options) {
    budget.validate();
    const InstructionSet &isa = options.isa != nullptr ? *options.isa : InstructionSet::standard();

    ExplorationReport report;
    report.budget = budget;
    report.dialect = dialect;
    report.root = prefix;
    report.machine_hash = isa.content_hash();

    std::map<BitString, const HaltingRecord *> reuse;
    if (options.reuse != nullptr) {
        const ExplorationReport &old = *options.reuse;
        if (old.dialect == dialect && old.machine_hash == report.machine_hash &&
            is_prefix(old.root, prefix)) {
            for (const HaltingRecord &r : old.halted) {
                if (r.steps <= budget.max_steps && r.program.size() <= budget.max_len &&
                    is_prefix(prefix, r.program) && r.program.size() > prefix.size()) {
                    reuse.emplace(r.program, &r);
                }
            }
        }
    }

    const Explorer explorer(budget, isa, reuse);
    Tally tally;

    // Feed the restriction prefix.
    MachineState root;
    root.dialect = dialect;
    bool open_root = false;
    for (std::size_t i = 0;; ++i) {
        const Stop stop = explorer.executor().advance(root, budget.max_steps);
        if (stop == Stop::Halted) {
            if (root.tape.size() != prefix.size()) {
                throw std::invalid_argument("prefix " + prefix.to_string() +
                                            " extends the halting program " +
                                            root.tape.to_string());
            }
            if (prefix.size() > budget.max_len) {
                tally.add_unresolved(prefix.size());
            } else {
                tally.records.push_back(make_record(std::move(root)));
            }
            break;
        }
        if (stop == Stop::OutOfGas) {
            tally.add_unresolved(prefix.size());
            break;
        }
        if (i == prefix.size()) {
            if (prefix.size() > budget.max_len) {
                tally.add_unresolved(prefix.size());
            } else {
                open_root = true;
            }
            break;
        }
        root.tape.push_back(prefix[i]);
    }

    if (open_root) {
        // Breadth-first split into independent subtrees.
        std::vector<MachineState> frontier;
        frontier.push_back(std::move(root));
        while (!frontier.empty() && frontier.size() < kFrontierTasks) {
            std::vector<MachineState> next;
            for (MachineState &node : frontier) {
                explorer.expand(std::move(node), tally, next);
            }
            frontier = std::move(next);
        }

        std::vector<Tally> results(frontier.size());
        std::atomic<std::size_t> cursor{0};
        auto worker = [&] {
            for (std::size_t i = cursor.fetch_add(1); i < frontier.size();
                 i = cursor.fetch_add(1)) {
                explorer.exhaust(std::move(frontier[i]), results[i]);
            }
        };
        const unsigned workers = std::min<std::size_t>(resolve_workers(options.workers),
                                                       std::max<std::size_t>(1, frontier.size()));
        if (workers <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            pool.reserve(workers);
            for (unsigned w = 0; w < workers; ++w) {
                pool.emplace_back(worker);
            }
            for (std::thread &t : pool) {
                t.join();
            }
        }
        for (Tally &t : results) {
            tally.merge(std::move(t));
        }
    }

    std::sort(tally.records.begin(), tally.records.end(),
              [](const HaltingRecord &a, const HaltingRecord &b) { return a.program < b.program; });
    std::vector<std::uint64_t> halted_by_depth;
    for (const HaltingRecord &r : tally.records) {
        const std::size_t d = r.program.size();
        if (halted_by_depth.size() <= d) {
            halted_by_depth.resize(d + 1, 0);
        }
        ++halted_by_depth[d];
    }
    report.halted = std::move(tally.records);
    report.halted_mass = mass_from_counts(halted_by_depth);
    report.unresolved_mass = mass_from_counts(tally.unresolved);
    return report;
}

} // namespace

ExplorationReport explore(const ExploreBudget &budget, Dialect dialect,
                          const ExploreOptions &options) {
    return run_exploration(budget, dialect, BitString{}, options);
}

ExplorationReport explore_subtree(const ExploreBudget &budget, Dialect dialect,
                                  const BitString &prefix, const ExploreOptions &options) {
    return run_exploration(budget, dialect, prefix, options);
}

bool kraft_check(const ExplorationReport &report) {
    if (report.halted_mass + report.unresolved_mass !=
        DyadicRational::pow2_neg(report.root.size())) {
        return false;
    }
    DyadicRational sum;
    std::vector<BitString> programs;
    programs.reserve(report.halted.size());
    for (const HaltingRecord &r : report.halted) {
        if (r.measure != DyadicRational::pow2_neg(r.program.size()) ||
            !is_prefix(report.root, r.program)) {
            return false;
        }
        sum += r.measure;
        programs.push_back(r.program);
    }
    if (sum != report.halted_mass) {
        return false;
    }
    std::sort(programs.begin(), programs.end());
    if (std::adjacent_find(programs.begin(), programs.end()) != programs.end()) {
        return false;
    }
    return check_prefix_free(std::move(programs));
}

ExplorationReport resume(const ExplorationReport &cached, const ExploreBudget &budget,
                         ExploreOptions options) {
    options.reuse = &cached;
    return run_exploration(budget, cached.dialect, cached.root, options);
}

// ------------------------------------------------------------------- cache

namespace {

constexpr int kCacheVersion = 1;
constexpr const char *kCacheFormat = "upsum-cache";

} // namespace

std::string to_cache_text(const ExplorationReport &report) {
    nlohmann::json records = nlohmann::json::array();
    for (const HaltingRecord &r : report.halted) {
        records.push_back({{"program", r.program.to_string()},
                           {"output", r.output.to_string()},
                           {"phase", r.phase.to_string()},
                           {"steps", r.steps},
                           {"measure", r.measure.to_string()}});
    }
    const nlohmann::json doc = {
        {"format", kCacheFormat},
        {"version", kCacheVersion},
        {"machine_hash", report.machine_hash},
        {"dialect", std::string(1, dialect_name(report.dialect))},
        {"root", report.root.to_string()},
        {"budget", {{"max_len", report.budget.max_len}, {"max_steps", report.budget.max_steps}}},
        {"halted_mass", report.halted_mass.to_string()},
        {"unresolved_mass", report.unresolved_mass.to_string()},
        {"halted", std::move(records)},
    };
    return doc.dump(1) + "\n";
}

ExplorationReport from_cache_text(std::string_view text, const InstructionSet &isa) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw CacheError(std::string("cache is not valid JSON: ") + e.what());
    }
    try {
        if (doc.at("format").get<std::string>() != kCacheFormat) {
            throw CacheError("not an upsum cache file");
        }
        if (doc.at("version").get<int>() != kCacheVersion) {
            throw CacheError("unsupported cache version " + doc.at("version").dump());
        }
        const std::string stored = doc.at("machine_hash").get<std::string>();
        const std::string current = isa.content_hash();
        if (stored != current) {
            throw CacheError("cache machine hash " + stored +
                             " does not match the current machine definition " + current +
                             "; refusing to load");
        }
        ExplorationReport report;
        report.machine_hash = stored;
        report.dialect = parse_dialect(doc.at("dialect").get<std::string>());
        report.root = BitString::parse(doc.at("root").get<std::string>());
        report.budget.max_len = doc.at("budget").at("max_len").get<std::uint32_t>();
        report.budget.max_steps = doc.at("budget").at("max_steps").get<std::uint64_t>();
        report.budget.validate();
        report.halted_mass = DyadicRational::parse(doc.at("halted_mass").get<std::string>());
        report.unresolved_mass =
            DyadicRational::parse(doc.at("unresolved_mass").get<std::string>());
        for (const nlohmann::json &j : doc.at("halted")) {
            HaltingRecord r;
            r.program = BitString::parse(j.at("program").get<std::string>());
            r.output = BitString::parse(j.at("output").get<std::string>());
            r.phase = PhaseFraction::parse(j.at("phase").get<std::string>());
            r.steps = j.at("steps").get<std::uint64_t>();
            r.measure = DyadicRational::parse(j.at("measure").get<std::string>());
            if (r.measure != DyadicRational::pow2_neg(r.program.size()) ||
                r.phase != PhaseFraction(bits_to_dyadic(r.output))) {
                throw CacheError("inconsistent cache record for program " + r.program.to_string());
            }
            report.halted.push_back(std::move(r));
        }
        return report;
    } catch (const nlohmann::json::exception &e) {
        throw CacheError(std::string("malformed cache: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw CacheError(std::string("malformed cache: ") + e.what());
    }
}

void save_cache(const ExplorationReport &report, const std::filesystem::path &path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw CacheError("cannot write cache " + path.string());
    }
    out << to_cache_text(report);
    if (!out) {
        throw CacheError("failed writing cache " + path.string());
    }
}

ExplorationReport load_cache(const std::filesystem::path &path, const InstructionSet &isa) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CacheError("cannot read cache " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_cache_text(buf.str(), isa);
}

} // namespace upsum
