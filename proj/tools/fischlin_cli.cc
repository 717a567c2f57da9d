// Copyright 2026 The Fischlin-QROM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fischlin/bounds.h"
#include "fischlin/extractor.h"
#include "fischlin/fischlin.h"
#include "fischlin/oracle_lab.h"
#include "fischlin/zk_sim.h"
#include "json.hpp"

using namespace fischlin;
using nlohmann::json;

namespace {

constexpr int kOk = 0, kReject = 1, kUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw UsageError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string &path, const std::string &data) {
    std::ofstream out(path, std::ios::binary);
    if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size()))) {
        throw UsageError("cannot write " + path);
    }
}

json read_json(const std::string &path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::exception &e) {
        throw UsageError(path + ": " + e.what());
    }
}

BigInt big_field(const json &j, const char *key) {
    const auto &v = j.at(key);
    return parse_decimal(v.is_string() ? v.get<std::string>() : std::to_string(v.get<uint64_t>()));
}

struct Session {
    GroupParams group = GroupParams::toy();
    FischlinParams params;
    Bytes seed = Bytes(32, 0);
    std::shared_ptr<const SigmaProtocol> sigma;

    Rng rng(const std::string &purpose) const {
        Bytes msg{'R', 'N', 'G', '1'};
        msg.insert(msg.end(), seed.begin(), seed.end());
        msg.insert(msg.end(), purpose.begin(), purpose.end());
        Bytes d = sha256(msg);
        uint64_t s = 0;
        for (int j = 0; j < 8; j++) {
            s = (s << 8) | d[j];
        }
        return Rng(s);
    }
};

Bytes parse_seed(const std::string &hex) {
    Bytes s;
    try {
        s = from_hex(hex);
    } catch (const std::exception &) {
        throw UsageError("seed is not hex");
    }
    if (s.size() != 32) {
        throw UsageError("seed must be exactly 32 bytes (64 hex digits)");
    }
    return s;
}

// precedence: --seed, then FISCHLIN_SEED, then the config file
Session load_session(const std::string &config_path, const std::string &seed_flag) {
    Session s;
    json cfg = config_path.empty() ? json::object() : read_json(config_path);
    try {
        if (cfg.contains("group")) {
            const auto &g = cfg["group"];
            if (g.is_string()) {
                std::string name = g.get<std::string>();
                if (name == "toy") {
                    s.group = GroupParams::toy();
                } else if (name == "tiny") {
                    s.group = GroupParams::tiny();
                } else {
                    throw UsageError("unknown group " + name);
                }
            } else {
                s.group = GroupParams{big_field(g, "p"), big_field(g, "q"), big_field(g, "g")};
            }
        }
        s.group.validate();
        json p = cfg.value("params", json{{"k", 8}, {"l", 6}, {"c", 4.0}});
        ParamMode mode = p.contains("lambda") ? ParamMode(FromLambda{p.at("lambda").get<uint32_t>(), p.at("l").get<uint32_t>()})
                                              : ParamMode(ExplicitRate{p.at("k").get<uint32_t>(), p.at("l").get<uint32_t>(),
                                                                       p.at("c").get<double>()});
        s.params = derive_params(mode);
        if (p.contains("T")) {
            s.params.T = p.at("T").get<uint64_t>();
            s.params.validate();
        }
        if (cfg.contains("seed")) {
            s.seed = parse_seed(cfg["seed"].get<std::string>());
        }
    } catch (const json::exception &e) {
        throw UsageError(std::string("bad config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw UsageError(std::string("bad config: ") + e.what());
    }
    if (const char *env = std::getenv("FISCHLIN_SEED"); env && *env) {
        s.seed = parse_seed(env);
    }
    if (!seed_flag.empty()) {
        s.seed = parse_seed(seed_flag);
    }
    s.sigma = protocol_for(s.group, s.params.N);
    return s;
}

json instance_json(const SigmaInstance &inst) {
    return {{"p", to_decimal(inst.group.p)}, {"q", to_decimal(inst.group.q)}, {"g", to_decimal(inst.group.g)},
            {"x", to_decimal(inst.x)}};
}

SigmaInstance load_instance(const std::string &path, const Session &s) {
    json j = read_json(path);
    try {
        SigmaInstance inst{GroupParams{big_field(j, "p"), big_field(j, "q"), big_field(j, "g")}, big_field(j, "x")};
        if (!(inst.group == s.group)) {
            throw UsageError("instance group differs from the configured group");
        }
        if (!inst.group.in_subgroup(inst.x)) {
            throw UsageError("instance x is not in the subgroup");
        }
        return inst;
    } catch (const json::exception &e) {
        throw UsageError(path + ": " + e.what());
    }
}

SigmaWitness load_witness(const std::string &path) {
    json j = read_json(path);
    try {
        return SigmaWitness{big_field(j, "w")};
    } catch (const json::exception &e) {
        throw UsageError(path + ": " + e.what());
    }
}

json params_json(const FischlinParams &p) {
    return {{"k", p.k}, {"l", p.l}, {"N", p.N}, {"T", p.T}, {"c", p.c_rate}, {"lambda", p.lambda}, {"t_legacy", p.t_legacy}};
}

void emit(const json &j) { std::cout << j.dump() << "\n"; }

void emit_raw(const std::string &s) { std::cout << s << "\n"; }

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Fischlin transform toolkit: prove, verify, extract, simulate, bounds, lab"};
    app.require_subcommand(1);
    std::string config, seed, record, out;
    bool as_json = false;
    app.add_option("--config", config, "session config JSON");
    app.add_option("--seed", seed, "32-byte oracle seed, hex");
    app.add_option("--record", record, "write the oracle transcript (JSONL)");
    app.add_option("--out", out, "output path");
    app.add_flag("--json", as_json, "JSON instead of CSV for bounds --grid");

    std::string instance_path, witness_path, proof_path, transcript_path;

    auto *keygen = app.add_subcommand("keygen", "sample a witness and its instance");
    keygen->add_option("--witness-out", witness_path, "witness JSON path")->required();

    auto *prove = app.add_subcommand("prove", "produce a proof");
    prove->add_option("--instance", instance_path)->required();
    prove->add_option("--witness", witness_path)->required();

    auto *verify_cmd = app.add_subcommand("verify", "check a proof");
    verify_cmd->add_option("--instance", instance_path)->required();
    verify_cmd->add_option("--proof", proof_path)->required();

    auto *extract_cmd = app.add_subcommand("extract", "recover a witness from a proof and transcript");
    extract_cmd->add_option("--instance", instance_path)->required();
    extract_cmd->add_option("--proof", proof_path)->required();
    extract_cmd->add_option("--transcript", transcript_path)->required();

    auto *simulate_cmd = app.add_subcommand("simulate", "witness-free proof via oracle programming");
    simulate_cmd->add_option("--instance", instance_path)->required();

    double bk = 1 << 30, bc = 1, bq = 1 << 20;
    uint32_t bl = 14;
    bool grid = false;
    auto *bounds_cmd = app.add_subcommand("bounds", "evaluate the extraction bound chain");
    bounds_cmd->add_option("--k", bk);
    bounds_cmd->add_option("--l", bl);
    bounds_cmd->add_option("--c", bc);
    bounds_cmd->add_option("--q", bq);
    bounds_cmd->add_flag("--grid", grid, "sweep l in {14,16,18}, c in {1,2,4}, k = 2^20..2^34");

    double pk = 1 << 30, pc = 1;
    uint64_t pbase = 0;
    auto *plan_cmd = app.add_subcommand("plan", "pick l and N for a target k and rate");
    plan_cmd->add_option("--k", pk);
    plan_cmd->add_option("--c", pc);
    plan_cmd->add_option("--base", pbase, "Sigma challenge space (default: group order)");

    std::string check;
    uint32_t ll = 1, lm = 4, ln = 2, ldomain = 2;
    uint64_t lk = 2, ltrials = 0, ln_bern = 4096;
    double lgamma = 0.5, lp = 1.0 / 16, ldelta = 0.5;
    std::string lstate = "plus";
    std::vector<double> leps{1, 2, 3, 4, 5, 6};
    std::vector<uint32_t> lqueries{0};
    auto *lab_cmd = app.add_subcommand("lab", "numerical checks: comp, comp-tail, tail-sweep, measure, martingale, chernoff, query");
    lab_cmd->add_option("check", check)->required();
    lab_cmd->add_option("--l", ll);
    lab_cmd->add_option("--k", lk);
    lab_cmd->add_option("--gamma", lgamma);
    lab_cmd->add_option("--m", lm);
    lab_cmd->add_option("--n", ln);
    lab_cmd->add_option("--trials", ltrials);
    lab_cmd->add_option("--state", lstate, "martingale state: plus, zero, symmetric");
    lab_cmd->add_option("--eps", leps);
    lab_cmd->add_option("--bernoullis", ln_bern);
    lab_cmd->add_option("--p", lp);
    lab_cmd->add_option("--delta", ldelta);
    lab_cmd->add_option("--domain", ldomain);
    lab_cmd->add_option("--queries", lqueries);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        Session s = load_session(config, seed);

        if (keygen->parsed()) {
            if (out.empty()) {
                throw UsageError("keygen needs --out for the instance");
            }
            Rng rng = s.rng("keygen");
            auto [inst, wit] = fischlin::keygen(s.group, rng);
            json ij = instance_json(inst);
            write_file(out, ij.dump() + "\n");
            write_file(witness_path, json{{"w", to_decimal(wit.w)}}.dump() + "\n");
            emit({{"instance", ij}, {"instance_path", out}, {"witness_path", witness_path}});
            return kOk;
        }

        if (prove->parsed()) {
            auto inst = load_instance(instance_path, s);
            auto wit = load_witness(witness_path);
            if (!in_relation(inst, wit)) {
                throw UsageError("witness does not match the instance");
            }
            RecordingOracle oracle(s.seed, s.params);
            Rng rng = s.rng("prove");
            auto res = fischlin::prove(s.params, *s.sigma, inst, wit, oracle, rng);
            if (!record.empty()) {
                write_file(record, oracle.transcript().to_jsonl());
            }
            if (const auto *ab = std::get_if<Abort>(&res)) {
                emit({{"status", "abort"}, {"repetition", ab->repetition}, {"queries", oracle.transcript().size()}});
                return kReject;
            }
            const auto &proof = std::get<Proof>(res);
            if (!out.empty()) {
                auto bytes = serialize_proof(s.params, proof);
                write_file(out, std::string(bytes.begin(), bytes.end()));
            }
            emit({{"status", "ok"}, {"params", params_json(s.params)}, {"queries", oracle.transcript().size()},
                  {"proof", json::parse(proof_to_json(proof))}});
            return kOk;
        }

        auto load_proof = [&](const SigmaInstance &inst) -> std::optional<Proof> {
            std::string raw = read_file(proof_path);
            Bytes data(raw.begin(), raw.end());
            try {
                return deserialize_proof(s.params, data, s.sigma.get(), &inst);
            } catch (const DecodeError &e) {
                std::cerr << "proof does not decode: " << e.what() << "\n";
                return std::nullopt;
            }
        };

        if (verify_cmd->parsed()) {
            auto inst = load_instance(instance_path, s);
            auto proof = load_proof(inst);
            bool ok = false;
            if (proof) {
                PlainOracle oracle(s.seed, s.params);
                ok = fischlin::verify(s.params, *s.sigma, inst, *proof, oracle);
            }
            emit({{"verdict", ok ? "accept" : "reject"}, {"decoded", proof.has_value()}});
            return ok ? kOk : kReject;
        }

        if (extract_cmd->parsed()) {
            auto inst = load_instance(instance_path, s);
            auto proof = load_proof(inst);
            if (!proof) {
                emit({{"status", "NoPairFound"}, {"details", "proof does not decode"}});
                return kReject;
            }
            OracleTranscript transcript;
            try {
                transcript = OracleTranscript::from_jsonl(s.params, read_file(transcript_path));
            } catch (const DecodeError &e) {
                throw UsageError(transcript_path + ": " + e.what());
            }
            auto outcome = fischlin::extract(s.params, *s.sigma, inst, *proof, transcript);
            emit_raw(outcome.to_json());
            return outcome.status == ExtractionStatus::Extracted ? kOk : kReject;
        }

        if (simulate_cmd->parsed()) {
            auto inst = load_instance(instance_path, s);
            RecordingOracle oracle(s.seed, s.params);
            Rng rng = s.rng("simulate");
            auto res = fischlin::simulate(s.params, *s.sigma, inst, oracle, rng);
            if (const auto *ab = std::get_if<Abort>(&res)) {
                if (!record.empty()) {
                    write_file(record, oracle.transcript().to_jsonl());
                }
                emit({{"status", "abort"}, {"repetition", ab->repetition}});
                return kReject;
            }
            const auto &proof = std::get<SimOutput>(res).proof;
            bool ok = fischlin::verify(s.params, *s.sigma, inst, proof, oracle);
            if (!record.empty()) {
                write_file(record, oracle.transcript().to_jsonl());
            }
            if (!out.empty()) {
                auto bytes = serialize_proof(s.params, proof);
                write_file(out, std::string(bytes.begin(), bytes.end()));
            }
            emit({{"status", "ok"}, {"verdict_programmed", ok ? "accept" : "reject"},
                  {"programmed_points", oracle.table().overrides.size()}, {"proof", json::parse(proof_to_json(proof))}});
            return ok ? kOk : kReject;
        }

        if (bounds_cmd->parsed()) {
            if (!grid) {
                emit_raw(eval_chain(bk, bl, bc, bq).to_json());
                return kOk;
            }
            std::ostringstream csv;
            json rows = json::array();
            csv << grid_csv_header();
            for (uint32_t l : {14u, 16u, 18u}) {
                for (double c : {1.0, 2.0, 4.0}) {
                    for (int e = 20; e <= 34; e++) {
                        auto r = eval_chain(std::ldexp(1.0, e), l, c, bq);
                        csv << grid_csv_row(r);
                        rows.push_back(json::parse(r.to_json()));
                    }
                }
            }
            std::string body = as_json ? rows.dump() + "\n" : csv.str();
            if (!out.empty()) {
                write_file(out, body);
            }
            std::cout << body;
            return kOk;
        }

        if (plan_cmd->parsed()) {
            uint64_t base = pbase ? pbase : to_u64(s.group.q);
            emit_raw(plan_parameters(pk, pc, base).to_json());
            return kOk;
        }

        if (lab_cmd->parsed()) {
            Rng rng = s.rng("lab:" + check);
            bool pass = true;
            if (check == "comp") {
                auto c = lab::comp_matrix(ll);
                auto id = Eigen::MatrixXcd::Identity(c.rows(), c.cols());
                double inv = (c * c - id).cwiseAbs().maxCoeff();
                double uni = (c.adjoint() * c - id).cwiseAbs().maxCoeff();
                pass = inv <= 1e-12 && uni <= 1e-12;
                emit({{"check", "comp"}, {"params", {{"l", ll}}},
                      {"measured", {{"involution_defect", inv}, {"unitarity_defect", uni}}},
                      {"bound", 1e-12}, {"pass", pass}});
            } else if (check == "comp-tail") {
                double exact = lab::comp_zero_tail_exact(ll, lk, lgamma);
                double bound = lab::comp_zero_tail_bound(ll, lk, lgamma);
                json measured = {{"exact_tail", exact}, {"chernoff", lab::comp_zero_tail_chernoff(ll, lk, lgamma)}};
                if (std::pow(std::ldexp(1.0, ll) + 1, static_cast<double>(lk)) <= lab::kMaxAmplitudes) {
                    measured["tensor_tail"] = lab::comp_zero_tail_tensor(ll, static_cast<uint32_t>(lk), lgamma);
                }
                pass = exact <= bound * (1 + 1e-12);
                emit({{"check", "comp-tail"}, {"params", {{"l", ll}, {"k", lk}, {"gamma", lgamma}}},
                      {"measured", measured}, {"bound", bound}, {"pass", pass}});
            } else if (check == "tail-sweep") {
                auto sw = lab::comp_zero_tail_sweep(2, 8, 4, 4096);
                pass = sw.pass();
                emit_raw(sw.to_json());
            } else if (check == "measure") {
                uint64_t lab_seed = rng();
                auto sw = lab::measure_sweep(lm, ln, ll, ltrials ? static_cast<uint32_t>(ltrials) : 200, lab_seed);
                emit_raw(sw.to_json());
                pass = sw.pass();
            } else if (check == "martingale") {
                lab::TensorState st;
                if (lstate == "plus") {
                    st = lab::product_state(lm, ll, lab::plus_state(ll));
                } else if (lstate == "zero") {
                    st = lab::product_state(lm, ll, lab::basis_state(size_t{1} << ll, 0));
                } else if (lstate == "symmetric") {
                    st = lab::build_symmetric_state(lm, ln, ll, rng, lab::SymMode::Projected, 2);
                } else {
                    throw UsageError("unknown state " + lstate);
                }
                auto r = lab::sequential_measure_martingale(st, leps, ltrials ? ltrials : 100000, rng);
                emit_raw(r.to_json());
                pass = r.pass();
            } else if (check == "chernoff") {
                auto r = lab::chernoff_mc(ln_bern, lp, ldelta, ltrials ? ltrials : 20000, rng);
                emit_raw(r.to_json());
                pass = r.pass();
            } else if (check == "query") {
                auto r = lab::query_unitary_smoke(ll, ldomain, lqueries);
                emit_raw(r.to_json());
                pass = r.pass();
            } else {
                throw UsageError("unknown lab check " + check);
            }
            return pass ? kOk : kReject;
        }
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
    return kUsage;
}
