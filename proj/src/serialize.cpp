#include "hcsl/serialize.hpp"

#include <fstream>

#include <json.hpp>

#include "hcsl/errors.hpp"

namespace hcsl {

namespace {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << text << '\n';
    if (!out) throw DataError("write failed: " + path);
}

json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open: " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
}

// json::exception covers missing keys and type mismatches during reads;
// invalid_argument covers semantic validation (e.g. a malformed graph)
template <typename Fn>
auto guarded(const std::string& path, Fn fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DataError&) {
        throw;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    } catch (const std::invalid_argument& e) {
        throw DataError(path + ": " + e.what());
    }
}

ordered_json dag_to_json(const Dag& g) {
    ordered_json j;
    j["d"] = g.d;
    auto edges = ordered_json::array();
    for (const auto& [tail, head] : g.edges)  // std::set is already sorted
        edges.push_back({tail, head});
    j["edges"] = edges;
    return j;
}

Dag dag_from_json(const json& j) {
    Dag g;
    g.d = j.at("d").get<int>();
    for (const auto& e : j.at("edges"))
        g.edges.insert({e.at(0).get<int>(), e.at(1).get<int>()});
    validate(g);
    return g;
}

}  // namespace

void write_dag_json(const Dag& g, const std::string& path) {
    write_text(path, dag_to_json(g).dump(2));
}

Dag read_dag_json(const std::string& path) {
    const json j = read_json(path);
    return guarded(path, [&] { return dag_from_json(j); });
}

void write_ordering_json(const Ordering& o, const std::string& path) {
    ordered_json j;
    j["pi"] = o.pi;
    j["layers"] = o.layers;
    auto trace = ordered_json::array();
    for (const auto& step : o.w_trace) {
        auto entry = ordered_json::array();
        for (const auto& [node, w] : step) entry.push_back({node, w});
        trace.push_back(entry);
    }
    j["w_trace"] = trace;
    write_text(path, j.dump(2));
}

Ordering read_ordering_json(const std::string& path) {
    const json j = read_json(path);
    return guarded(path, [&] {
        Ordering o;
        o.pi = j.at("pi").get<std::vector<int>>();
        o.layers = j.at("layers").get<std::vector<std::vector<int>>>();
        for (const auto& step : j.at("w_trace")) {
            std::vector<std::pair<int, double>> entry;
            for (const auto& rec : step)
                entry.emplace_back(rec.at(0).get<int>(), rec.at(1).get<double>());
            o.w_trace.push_back(std::move(entry));
        }
        return o;
    });
}

void write_model_json(const HcmModel& m, const std::string& path) {
    ordered_json j = dag_to_json(m.g);
    j["mechanism"] = m.mechanism;
    auto nodes = ordered_json::array();
    auto terms_to_json = [](const std::vector<Term>& terms) {
        auto arr = ordered_json::array();
        for (const Term& t : terms) {
            ordered_json rec;
            rec["parent"] = t.parent;
            rec["prim"] = primitive_name(t.prim);
            rec["coef"] = t.coef;
            arr.push_back(rec);
        }
        return arr;
    };
    for (const NodeMechanism& nm : m.nodes) {
        ordered_json rec;
        rec["eta1"] = terms_to_json(nm.eta1);
        rec["log_neg2eta2"] = terms_to_json(nm.s);
        nodes.push_back(rec);
    }
    j["nodes"] = nodes;
    write_text(path, j.dump(2));
}

HcmModel read_model_json(const std::string& path) {
    const json j = read_json(path);
    return guarded(path, [&] {
        HcmModel m;
        m.g = dag_from_json(j);
        m.mechanism = j.at("mechanism").get<std::string>();
        auto terms_from_json = [&](const json& arr) {
            std::vector<Term> terms;
            for (const auto& rec : arr) {
                Term t;
                t.parent = rec.at("parent").get<int>();
                t.prim = primitive_from_name(rec.at("prim").get<std::string>());
                t.coef = rec.at("coef").get<double>();
                terms.push_back(t);
            }
            return terms;
        };
        for (const auto& rec : j.at("nodes")) {
            NodeMechanism nm;
            nm.eta1 = terms_from_json(rec.at("eta1"));
            nm.s = terms_from_json(rec.at("log_neg2eta2"));
            m.nodes.push_back(std::move(nm));
        }
        if (m.nodes.size() != static_cast<std::size_t>(m.g.d))
            throw DataError(path + ": node count does not match d");
        return m;
    });
}

void write_scores_json(const Scores& s, const std::string& path) {
    ordered_json j;
    if (s.order_divergence.has_value())
        j["order_divergence"] = *s.order_divergence;
    else
        j["order_divergence"] = nullptr;
    j["shd"] = s.shd;
    j["f1"] = s.f1;
    if (s.auc.has_value())
        j["auc"] = *s.auc;
    else
        j["auc"] = nullptr;
    write_text(path, j.dump(2));
}

Scores read_scores_json(const std::string& path) {
    const json j = read_json(path);
    return guarded(path, [&] {
        Scores s;
        if (!j.at("order_divergence").is_null())
            s.order_divergence = j.at("order_divergence").get<int>();
        s.shd = j.at("shd").get<int>();
        s.f1 = j.at("f1").get<double>();
        if (!j.at("auc").is_null()) s.auc = j.at("auc").get<double>();
        return s;
    });
}

void write_pvalues_csv(const std::vector<double>& pvalues,
                       const std::vector<std::string>& names,
                       const std::string& path) {
    const std::size_t d = names.size();
    if (pvalues.size() != d * d)
        throw std::invalid_argument("write_pvalues_csv: matrix size mismatch");
    Dataset ds = Dataset::zeros(d, d);
    ds.names = names;
    for (std::size_t tail = 0; tail < d; ++tail)
        for (std::size_t head = 0; head < d; ++head)
            ds.col(head)[tail] = pvalues[tail * d + head];
    write_csv(ds, path);
}

std::vector<double> read_pvalues_csv(const std::string& path) {
    const Dataset ds = read_csv(path);
    if (ds.n != ds.d) throw DataError(path + ": p-value matrix must be square");
    std::vector<double> p(ds.n * ds.d);
    for (std::size_t tail = 0; tail < ds.n; ++tail)
        for (std::size_t head = 0; head < ds.d; ++head)
            p[tail * ds.d + head] = ds.col(head)[tail];
    return p;
}

}  // namespace hcsl
