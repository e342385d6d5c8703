#include "dynrbn/experiment.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace dynrbn {

using detail::format_double;
using detail::parse_number;
using detail::split;
using detail::trim;

std::string_view to_string(ExperimentKind kind)
{
    return kind == ExperimentKind::dynamics ? "dynamics" : "evolve";
}

std::string_view to_string(ScheduleKind kind)
{
    return kind == ScheduleKind::switching ? "switching" : "stationary";
}

namespace {

bool parse_bool(std::string_view v, std::string_view key)
{
    if (v == "true" || v == "1" || v == "yes")
        return true;
    if (v == "false" || v == "0" || v == "no")
        return false;
    throw std::invalid_argument("invalid boolean '" + std::string(v) + "' for " + std::string(key));
}

template <typename T>
std::vector<T> parse_list(std::string_view v, std::string_view key)
{
    std::vector<T> out;
    for (auto item : split(v, ','))
        out.push_back(parse_number<T>(item, key));
    return out;
}

template <typename T>
std::string join(const std::vector<T> &xs)
{
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i)
    {
        if (i)
            out += ',';
        if constexpr (std::is_floating_point_v<T>)
            out += format_double(xs[i]);
        else
            out += std::to_string(xs[i]);
    }
    return out;
}

std::string cell_label(std::size_t b, std::size_t k)
{
    return "b" + std::to_string(b) + "k" + std::to_string(k);
}

std::string rep_label(std::size_t rep)
{
    std::ostringstream os;
    os << std::setw(3) << std::setfill('0') << rep;
    return os.str();
}

std::ofstream open_output(const std::filesystem::path &path)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void close_output(std::ofstream &out, const std::filesystem::path &path)
{
    out.close();
    if (!out)
        throw std::runtime_error("failed writing '" + path.string() + "'");
}

} // namespace

void ExperimentConfig::set(std::string_view key, std::string_view value)
{
    key = trim(key);
    value = trim(value);
    if (key == "name")
        name = std::string(value);
    else if (key == "kind")
    {
        if (value == "dynamics")
            kind = ExperimentKind::dynamics;
        else if (value == "evolve")
            kind = ExperimentKind::evolve;
        else
            throw std::invalid_argument("unknown experiment kind '" + std::string(value) + "'");
    }
    else if (key == "b")
        b_values = parse_list<std::size_t>(value, key);
    else if (key == "k")
        k_values = parse_list<std::size_t>(value, key);
    else if (key == "dynamic_percent")
        dynamic_percents = parse_list<double>(value, key);
    else if (key == "nodes")
        nodes = parse_number<std::size_t>(value, key);
    else if (key == "traits")
        traits = parse_number<std::size_t>(value, key);
    else if (key == "cycles")
        cycles = parse_number<std::size_t>(value, key);
    else if (key == "schedule")
    {
        if (value == "stationary")
            schedule = ScheduleKind::stationary;
        else if (value == "switching")
            schedule = ScheduleKind::switching;
        else
            throw std::invalid_argument("unknown schedule '" + std::string(value) + "'");
    }
    else if (key == "landscapes")
        landscapes = parse_number<std::size_t>(value, key);
    else if (key == "runs_per_landscape")
        runs_per_landscape = parse_number<std::size_t>(value, key);
    else if (key == "networks")
        networks = parse_number<std::size_t>(value, key);
    else if (key == "inheritance")
        variant.inheritance = parse_inheritance(value);
    else if (key == "table_inheritance")
        variant.table_inheritance = parse_table_inheritance(value);
    else if (key == "dynamism")
        variant.mode = parse_dynamism_mode(value);
    else if (key == "addressing")
        variant.addressing = parse_addressing(value);
    else if (key == "mutation_set")
        variant.mutation_set = parse_mutation_set(value);
    else if (key == "p_dynamic")
        variant.p_dynamic_init = parse_number<double>(value, key);
    else if (key == "generations")
        variant.generations = parse_number<std::size_t>(value, key);
    else if (key == "trace_interval")
        variant.trace_interval = parse_number<std::size_t>(value, key);
    else if (key == "whole_function_mutation")
        variant.whole_function_mutation = parse_bool(value, key);
    else if (key == "seed")
        seed = parse_number<std::uint64_t>(value, key);
    else if (key == "workers")
        workers = parse_number<std::size_t>(value, key);
    else if (key == "write_traces")
        write_traces = parse_bool(value, key);
    else if (key == "write_genomes")
        write_genomes = parse_bool(value, key);
    else
        throw std::invalid_argument("unknown configuration key '" + std::string(key) + "'");
}

void ExperimentConfig::validate() const
{
    if (b_values.empty())
        throw std::invalid_argument("b list is empty");
    for (auto b : b_values)
        RbnConfig::uniform(nodes, b).validate();
    if (workers == 0)
        throw std::invalid_argument("workers must be positive");
    if (kind == ExperimentKind::evolve)
    {
        if (traits == 0)
            throw std::invalid_argument("traits must be positive");
        if (2 * traits > nodes)
            throw std::invalid_argument("nodes must be at least twice traits (inputs and trait nodes are disjoint)");
        if (cycles == 0 || (schedule == ScheduleKind::switching && cycles < 2))
            throw std::invalid_argument("lifecycle too short for the schedule");
        if (k_values.empty())
            throw std::invalid_argument("k list is empty");
        for (auto k : k_values)
            if (k >= traits)
                throw std::invalid_argument("K must be below the trait count");
        if (landscapes == 0 || runs_per_landscape == 0)
            throw std::invalid_argument("landscapes and runs_per_landscape must be positive");
        variant.validate();
    }
    else
    {
        if (dynamic_percents.empty())
            throw std::invalid_argument("dynamic_percent list is empty");
        for (double p : dynamic_percents)
            if (!(p >= 0.0 && p <= 100.0))
                throw std::invalid_argument("dynamic_percent values must lie in [0,100]");
        if (networks == 0)
            throw std::invalid_argument("networks must be positive");
        if (cycles < 2)
            throw std::invalid_argument("dynamics needs at least two cycles");
    }
}

std::string ExperimentConfig::to_text() const
{
    std::ostringstream os;
    os << "name = " << name << '\n';
    os << "kind = " << to_string(kind) << '\n';
    os << "seed = " << seed << '\n';
    os << "nodes = " << nodes << '\n';
    os << "b = " << join(b_values) << '\n';
    os << "cycles = " << cycles << '\n';
    if (kind == ExperimentKind::dynamics)
    {
        os << "dynamic_percent = " << join(dynamic_percents) << '\n';
        os << "networks = " << networks << '\n';
        os << "dynamism = " << to_string(variant.mode) << '\n';
        os << "addressing = " << to_string(variant.addressing) << '\n';
        return os.str();
    }
    os << "k = " << join(k_values) << '\n';
    os << "traits = " << traits << '\n';
    os << "schedule = " << to_string(schedule) << '\n';
    os << "landscapes = " << landscapes << '\n';
    os << "runs_per_landscape = " << runs_per_landscape << '\n';
    os << "inheritance = " << to_string(variant.inheritance) << '\n';
    os << "table_inheritance = " << to_string(variant.table_inheritance) << '\n';
    os << "dynamism = " << to_string(variant.mode) << '\n';
    os << "addressing = " << to_string(variant.addressing) << '\n';
    os << "mutation_set = " << to_string(variant.mutation_set) << '\n';
    os << "p_dynamic = " << format_double(variant.p_dynamic_init) << '\n';
    os << "generations = " << variant.generations << '\n';
    os << "trace_interval = " << variant.trace_interval << '\n';
    os << "whole_function_mutation = " << (variant.whole_function_mutation ? "true" : "false") << '\n';
    os << "write_traces = " << (write_traces ? "true" : "false") << '\n';
    os << "write_genomes = " << (write_genomes ? "true" : "false") << '\n';
    return os.str();
}

EnvironmentSchedule ExperimentConfig::make_schedule() const
{
    return schedule == ScheduleKind::switching ? EnvironmentSchedule::switching(traits, cycles)
                                               : EnvironmentSchedule::stationary(traits, cycles);
}

ExperimentConfig parse_config(std::istream &in)
{
    ExperimentConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        std::string_view view = line;
        if (auto hash = view.find('#'); hash != std::string_view::npos)
            view = view.substr(0, hash);
        view = trim(view);
        if (view.empty())
            continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("line " + std::to_string(lineno) + ": expected key = value");
        try
        {
            cfg.set(view.substr(0, eq), view.substr(eq + 1));
        }
        catch (const std::invalid_argument &e)
        {
            throw std::invalid_argument("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config '" + path.string() + "'");
    try
    {
        return parse_config(in);
    }
    catch (const std::invalid_argument &e)
    {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

std::vector<NkLandscape> replicate_landscapes(const ExperimentConfig &cfg, std::size_t k, std::size_t index,
                                              std::size_t count)
{
    std::vector<NkLandscape> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(generate_landscape(cfg.traits, k, derive_seed(cfg.seed, {seed_tag_landscape, cfg.traits, k, index, i})));
    return out;
}

std::vector<NodeId> replicate_trait_nodes(const ExperimentConfig &cfg, std::size_t k, std::size_t index)
{
    Rng rng(derive_seed(cfg.seed, {seed_tag_traits, cfg.traits, k, index, cfg.nodes}));
    return choose_trait_nodes(cfg.nodes, cfg.traits, cfg.traits, rng);
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)> &job)
{
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            job(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < count;)
        {
            try
            {
                job(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back(worker);
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

DynamicsResult run_dynamics(const ExperimentConfig &cfg)
{
    cfg.validate();
    DynamicsResult result;
    for (auto b : cfg.b_values)
        for (double pct : cfg.dynamic_percents)
            result.cells.push_back(DynamicsCell{b, pct, std::vector<double>(cfg.networks, 0.0), {}, 1.0});

    VariantConfig variant = cfg.variant;
    variant.p_dynamic_init = 0.0;
    variant.mutation_set = MutationSet::full6;
    variant.table_inheritance = TableInheritance::inherit;
    variant.inheritance = Inheritance::genome_restart;

    const std::size_t per_cell = cfg.networks;
    parallel_for(result.cells.size() * per_cell, cfg.workers, [&](std::size_t job) {
        auto &cell = result.cells[job / per_cell];
        const std::size_t net = job % per_cell;
        try
        {
            const auto pct_key = static_cast<std::uint64_t>(std::llround(cell.dynamic_percent * 1000.0));
            Rng rng(derive_seed(cfg.seed, {seed_tag_network, cfg.nodes, cell.b, pct_key, net}));
            Genome g = init_genome(RbnConfig::uniform(cfg.nodes, cell.b), variant, rng);
            const auto forced =
                static_cast<std::size_t>(std::llround(cell.dynamic_percent / 100.0 * static_cast<double>(cfg.nodes)));
            std::vector<std::size_t> order(cfg.nodes);
            for (std::size_t i = 0; i < order.size(); ++i)
                order[i] = i;
            for (std::size_t a = 0; a < forced; ++a)
            {
                std::swap(order[a], order[a + rng.below(order.size() - a)]);
                g.dynamic[order[a]] = 1;
            }
            cell.finals[net] = dynamics_profile(instantiate(g, variant), cfg.cycles).final_value;
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error("dynamics cell b=" + std::to_string(cell.b) +
                                     " dynamic%=" + format_double(cell.dynamic_percent) + " network " +
                                     std::to_string(net) + ": " + e.what());
        }
    });

    for (auto &cell : result.cells)
    {
        cell.stats = summarize(cell.finals);
        auto base = std::find_if(result.cells.begin(), result.cells.end(), [&](const DynamicsCell &c) {
            return c.b == cell.b && c.dynamic_percent == 0.0;
        });
        cell.p_vs_static = base == result.cells.end() ? std::nan("") : welch_p_or_degenerate(base->finals, cell.finals);
    }
    return result;
}

std::vector<double> EvolutionCell::final_fitness() const
{
    std::vector<double> out;
    for (const auto &r : replicates)
        out.push_back(r.record.final_fitness);
    return out;
}

std::vector<double> EvolutionCell::final_dynamic_percent() const
{
    std::vector<double> out;
    for (const auto &r : replicates)
        out.push_back(100.0 * r.record.final_dynamic_fraction);
    return out;
}

EvolutionResult run_evolution_sweep(const ExperimentConfig &cfg)
{
    cfg.validate();
    const EnvironmentSchedule schedule = cfg.make_schedule();
    const std::size_t per_replicate = schedule.landscapes_required();

    EvolutionResult result;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<NkLandscape>> landscapes;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<NodeId>> traits;
    for (auto k : cfg.k_values)
        for (std::size_t l = 0; l < cfg.landscapes; ++l)
        {
            auto set = replicate_landscapes(cfg, k, l, per_replicate);
            auto &sums = result.landscape_checksums[{k, l}];
            for (const auto &land : set)
                sums.push_back(landscape_checksum(land));
            landscapes.emplace(std::pair{k, l}, std::move(set));
            traits.emplace(std::pair{k, l}, replicate_trait_nodes(cfg, k, l));
        }

    const std::size_t per_cell = cfg.landscapes * cfg.runs_per_landscape;
    for (auto b : cfg.b_values)
        for (auto k : cfg.k_values)
        {
            EvolutionCell cell{b, k, {}, {}, {}};
            cell.replicates.resize(per_cell);
            result.cells.push_back(std::move(cell));
        }

    parallel_for(result.cells.size() * per_cell, cfg.workers, [&](std::size_t job) {
        auto &cell = result.cells[job / per_cell];
        const std::size_t rep = job % per_cell;
        const std::size_t l = rep / cfg.runs_per_landscape;
        const std::size_t r = rep % cfg.runs_per_landscape;
        try
        {
            const EvalConfig eval{cfg.cycles, cfg.traits, traits.at({cell.k, l})};
            const auto seed = derive_seed(cfg.seed, {seed_tag_run, cfg.nodes, cell.b, cell.k, l, r});
            cell.replicates[rep] = ReplicateOutcome{
                l, r,
                hillclimb(cfg.variant, RbnConfig::uniform(cfg.nodes, cell.b), eval, schedule,
                          landscapes.at({cell.k, l}), seed)};
        }
        catch (const std::exception &e)
        {
            throw std::runtime_error("evolve cell " + cell_label(cell.b, cell.k) + " landscape " + std::to_string(l) +
                                     " run " + std::to_string(r) + ": " + e.what());
        }
    });

    for (auto &cell : result.cells)
    {
        cell.fitness = summarize(cell.final_fitness());
        cell.dynamic_percent = summarize(cell.final_dynamic_percent());
    }
    return result;
}

namespace {

void write_meta_header(std::ostream &out, const ExperimentConfig &cfg)
{
    out << "dynrbn experiment output\n";
    out << "csv_schema = " << csv_schema_version << '\n';
    out << "[config]\n" << cfg.to_text();
}

} // namespace

void write_dynamics_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg, const DynamicsResult &r)
{
    std::filesystem::create_directories(dir);

    auto path = dir / "summary.csv";
    auto out = open_output(path);
    out << "b,dynamic_percent,count,mean,sd,min,max,median,p_vs_static\n";
    for (const auto &c : r.cells)
        out << c.b << ',' << format_double(c.dynamic_percent) << ',' << c.stats.count << ','
            << format_double(c.stats.mean) << ',' << format_double(c.stats.sd) << ',' << format_double(c.stats.min)
            << ',' << format_double(c.stats.max) << ',' << format_double(c.stats.median) << ','
            << format_double(c.p_vs_static) << '\n';
    close_output(out, path);

    path = dir / "finals.csv";
    out = open_output(path);
    out << "b,dynamic_percent,network,final_changed_fraction\n";
    for (const auto &c : r.cells)
        for (std::size_t i = 0; i < c.finals.size(); ++i)
            out << c.b << ',' << format_double(c.dynamic_percent) << ',' << i << ',' << format_double(c.finals[i])
                << '\n';
    close_output(out, path);

    path = dir / "meta.txt";
    out = open_output(path);
    write_meta_header(out, cfg);
    out << "[notes]\n";
    out << "statistic = changed fraction between the last two of " << cfg.cycles << " unclamped cycles\n";
    out << "p_vs_static = Welch two-sided p against the 0% cell of the same b\n";
    close_output(out, path);
}

void write_evolution_outputs(const std::filesystem::path &dir, const ExperimentConfig &cfg, const EvolutionResult &r)
{
    std::filesystem::create_directories(dir);

    auto path = dir / "summary.csv";
    auto out = open_output(path);
    out << "b,k,count,fitness_mean,fitness_sd,fitness_min,fitness_max,fitness_median,"
           "dynamic_pct_mean,dynamic_pct_sd,dynamic_pct_min,dynamic_pct_max,dynamic_pct_median\n";
    for (const auto &c : r.cells)
    {
        out << c.b << ',' << c.k << ',' << c.fitness.count;
        for (const Summary *s : {&c.fitness, &c.dynamic_percent})
            out << ',' << format_double(s->mean) << ',' << format_double(s->sd) << ',' << format_double(s->min) << ','
                << format_double(s->max) << ',' << format_double(s->median);
        out << '\n';
    }
    close_output(out, path);

    path = dir / "finals.csv";
    out = open_output(path);
    out << "b,k,landscape,run,seed,final_fitness,final_dynamic_pct\n";
    for (const auto &c : r.cells)
        for (const auto &rep : c.replicates)
            out << c.b << ',' << c.k << ',' << rep.landscape << ',' << rep.run << ',' << rep.record.seed << ','
                << format_double(rep.record.final_fitness) << ','
                << format_double(100.0 * rep.record.final_dynamic_fraction) << '\n';
    close_output(out, path);

    for (const auto &c : r.cells)
        for (std::size_t i = 0; i < c.replicates.size(); ++i)
        {
            const auto stem = cell_label(c.b, c.k) + "_" + rep_label(i);
            if (cfg.write_traces)
            {
                path = dir / ("trace_" + stem + ".csv");
                out = open_output(path);
                write_trace_csv(out, c.replicates[i].record);
                close_output(out, path);
            }
            if (cfg.write_genomes)
            {
                path = dir / ("genome_" + stem + ".txt");
                out = open_output(path);
                write_genome(out, c.replicates[i].record.final_genome);
                close_output(out, path);
            }
        }

    path = dir / "meta.txt";
    out = open_output(path);
    write_meta_header(out, cfg);
    out << "[schedule]\n" << cfg.make_schedule().describe() << '\n';
    out << "[notes]\n";
    out << "pairing = landscapes and trait nodes depend only on (seed, traits, k, landscape index, nodes); "
           "arms sharing these values are paired\n";
    out << "replicate index = landscape * runs_per_landscape + run\n";
    out << "[landscapes]\n";
    for (const auto &[key, sums] : r.landscape_checksums)
    {
        out << "k=" << key.first << " landscape=" << key.second << " checksums=";
        for (std::size_t i = 0; i < sums.size(); ++i)
            out << (i ? "," : "") << std::hex << std::setw(16) << std::setfill('0') << sums[i] << std::dec;
        out << '\n';
    }
    close_output(out, path);
}

void run_experiment(const ExperimentConfig &cfg, const std::filesystem::path &dir)
{
    if (cfg.kind == ExperimentKind::dynamics)
        write_dynamics_outputs(dir, cfg, run_dynamics(cfg));
    else
        write_evolution_outputs(dir, cfg, run_evolution_sweep(cfg));
}

ArmFinals arm_finals(const EvolutionResult &r)
{
    ArmFinals out;
    for (const auto &c : r.cells)
    {
        out.fitness[{c.b, c.k}] = c.final_fitness();
        out.dynamic_percent[{c.b, c.k}] = c.final_dynamic_percent();
    }
    return out;
}

ArmFinals read_arm_finals(const std::filesystem::path &dir)
{
    const auto path = dir / "finals.csv";
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || trim(line) != "b,k,landscape,run,seed,final_fitness,final_dynamic_pct")
        throw std::runtime_error("'" + path.string() + "' is not an evolve finals table");
    ArmFinals out;
    std::size_t lineno = 1;
    while (std::getline(in, line))
    {
        ++lineno;
        if (trim(line).empty())
            continue;
        const auto f = split(line, ',');
        if (f.size() != 7)
            throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected 7 fields");
        const std::pair key{parse_number<std::size_t>(f[0], "b"), parse_number<std::size_t>(f[1], "k")};
        out.fitness[key].push_back(parse_number<double>(f[5], "final_fitness"));
        out.dynamic_percent[key].push_back(parse_number<double>(f[6], "final_dynamic_pct"));
    }
    return out;
}

std::vector<SignificanceRow> significance_report(const ArmFinals &a, const ArmFinals &b)
{
    std::vector<SignificanceRow> rows;
    for (const auto &[key, fa] : a.fitness)
    {
        auto it = b.fitness.find(key);
        if (it == b.fitness.end())
            continue;
        const auto &fb = it->second;
        const auto &da = a.dynamic_percent.at(key);
        const auto &db = b.dynamic_percent.at(key);
        SignificanceRow row;
        row.b = key.first;
        row.k = key.second;
        row.n_a = fa.size();
        row.n_b = fb.size();
        row.fitness_mean_a = summarize(fa).mean;
        row.fitness_mean_b = summarize(fb).mean;
        row.fitness_p = welch_p_or_degenerate(fa, fb);
        row.dynamic_mean_a = summarize(da).mean;
        row.dynamic_mean_b = summarize(db).mean;
        row.dynamic_p = welch_p_or_degenerate(da, db);
        rows.push_back(row);
    }
    return rows;
}

void write_significance_csv(std::ostream &out, const std::vector<SignificanceRow> &rows)
{
    out << "b,k,n_a,n_b,fitness_mean_a,fitness_mean_b,fitness_p,fitness_significant,"
           "dynamic_pct_mean_a,dynamic_pct_mean_b,dynamic_p,dynamic_significant\n";
    for (const auto &r : rows)
        out << r.b << ',' << r.k << ',' << r.n_a << ',' << r.n_b << ',' << format_double(r.fitness_mean_a) << ','
            << format_double(r.fitness_mean_b) << ',' << format_double(r.fitness_p) << ','
            << (r.fitness_p < significance_alpha ? 1 : 0) << ',' << format_double(r.dynamic_mean_a) << ','
            << format_double(r.dynamic_mean_b) << ',' << format_double(r.dynamic_p) << ','
            << (r.dynamic_p < significance_alpha ? 1 : 0) << '\n';
}

} // namespace dynrbn
