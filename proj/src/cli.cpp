/*
 * Copyright 2026 The bbalgebra Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bba/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>

#include <CLI11.hpp>
#include <json.hpp>

#include "bba/attack.hpp"
#include "bba/constructions.hpp"
#include "bba/field_recognition.hpp"
#include "bba/fixtures.hpp"
#include "bba/isomorphism.hpp"
#include "bba/random.hpp"
#include "bba/sampling.hpp"

namespace bba::cli {

namespace {

using Json = nlohmann::ordered_json;

struct Outcome {
  Json config = Json::object();
  bool success = false;
  std::string outcome = "success";
  std::optional<std::string> delta;
  QueryBudgetReport budget;
  VerificationSummary verification;
  Json details = Json::object();
  std::string summary;
};

Json budget_json(const QueryBudgetReport& b) {
  return Json{{"sample_calls", b.sample_calls},
              {"apply_calls", b.apply_calls},
              {"equal_calls", b.equal_calls}};
}

void fill_attack(Outcome& o, const AttackResult& r) {
  o.success = r.report.success();
  o.outcome = std::string(to_string(r.report.outcome));
  if (!r.report.delta.empty()) o.delta = r.report.delta;
  o.budget = r.report.budget;
  o.verification = r.report.verification;
  o.details["structure"] = r.report.structure;
  o.details["known_pairs_used"] = r.report.known_pairs_used;
  o.details["known_pairs_needed"] =
      r.report.known_pairs_needed ? Json(*r.report.known_pairs_needed) : Json(nullptr);
  o.details["survivors"] = r.report.survivors;
  o.details["survivors_truncated"] = r.report.survivors_truncated;
  if (!r.report.detail.empty()) o.details["detail"] = r.report.detail;
  o.summary = r.report.structure + ": " + o.outcome +
              (o.delta ? " (delta " + *o.delta + ")" : "") + ", " +
              std::to_string(o.verification.checked) + " checked, " +
              std::to_string(o.verification.mismatches) + " mismatches";
}

// The first plaintexts are `preferred`, the rest distinct random elements.
std::vector<Index> choose_plaintexts(std::size_t order, std::span<const Index> preferred,
                                     std::size_t count, std::uint64_t seed) {
  if (count > order) {
    throw UsageError("--known " + std::to_string(count) + " exceeds the structure order " +
                     std::to_string(order));
  }
  std::vector<Index> out;
  std::set<Index> used;
  for (Index a : preferred) {
    if (out.size() == count) break;
    if (used.insert(a).second) out.push_back(a);
  }
  Rng rng(derive_seed(seed, 11));
  while (out.size() < count) {
    const auto a = static_cast<Index>(uniform_below(rng, order));
    if (used.insert(a).second) out.push_back(a);
  }
  return out;
}

Outcome field_attack(const std::string& spec_text, std::size_t known, std::uint64_t seed) {
  const FieldSpec spec = FieldSpec::parse(spec_text);
  auto field = make_field(spec);
  Encryption enc = encrypt(field, seed);
  const Index gen = field->generator();
  const auto plain = choose_plaintexts(field->order(), std::span(&gen, 1), known, seed);
  const auto pairs = known_pairs(enc.oracle, plain);
  AttackResult r = attack_field(enc.box, spec, pairs, derive_seed(seed, 3));
  const std::uint64_t hidden_during_attack = enc.oracle.hidden_inverse_calls();
  verify_into(r, enc.oracle);
  Outcome o;
  o.config = {{"spec", spec.to_string()}, {"seed", seed}, {"known", known}};
  fill_attack(o, r);
  o.details["hidden_inverse_calls_during_attack"] = hidden_during_attack;
  return o;
}

Outcome group_attack(const std::string& descriptor, std::size_t known, std::uint64_t seed) {
  ExplicitPtr a = parse_structure(descriptor);
  if (a->kind() != StructureKind::group) {
    throw UsageError("'" + descriptor + "' is not a group; use field-attack for fields");
  }
  Encryption enc = encrypt(a, seed);
  const auto plain = choose_plaintexts(a->order(), a->generators(), known, seed);
  const auto pairs = known_pairs(enc.oracle, plain);
  AttackResult r = attack_group_small(enc.box, a, pairs, derive_seed(seed, 3));
  const std::uint64_t hidden_during_attack = enc.oracle.hidden_inverse_calls();
  verify_into(r, enc.oracle);
  Outcome o;
  o.config = {{"structure", descriptor}, {"seed", seed}, {"known", known}};
  fill_attack(o, r);
  o.details["hidden_inverse_calls_during_attack"] = hidden_during_attack;
  return o;
}

Outcome verify(const std::string& box_descriptor, const std::string& target,
               std::size_t confidence, std::uint64_t seed) {
  ExplicitPtr plain = parse_structure(box_descriptor);
  ExplicitPtr a = parse_structure(target);
  Encryption enc = encrypt(plain, seed);
  const BudgetMeter meter(*enc.box);
  const bool yes = verify_encrypts(enc.box, a, confidence, derive_seed(seed, 3));
  Outcome o;
  o.config = {{"box", box_descriptor}, {"target", target}, {"seed", seed},
              {"confidence", confidence}};
  o.success = yes;
  o.outcome = yes ? "success" : "wrong_structure";
  o.budget = meter.report();
  o.details["answer"] = yes ? "yes" : "no";
  o.summary = "does E(" + plain->name() + ") encrypt " + a->name() + "? " +
              (yes ? "yes" : "no");
  return o;
}

Outcome miller_rabin(std::uint64_t n, std::size_t rounds, std::uint64_t seed) {
  const MillerRabinResult mr = miller_rabin_bb(n, rounds, seed);
  Outcome o;
  o.config = {{"n", n}, {"rounds", rounds}, {"seed", seed}};
  o.success = true;
  o.budget = mr.budget;
  o.details["verdict"] = to_string(mr.verdict);
  o.details["rounds_run"] = mr.rounds_run;
  o.details["error_bound"] = mr.error_bound;
  o.details["witness"] = mr.witness ? Json(*mr.witness) : Json(nullptr);
  o.summary = std::to_string(n) + ": " + std::string(to_string(mr.verdict));
  return o;
}

Outcome pr_stats(const std::string& descriptor, std::size_t samples, std::size_t burn_in,
                 std::uint64_t seed) {
  ExplicitPtr a = parse_structure(descriptor);
  if (a->kind() != StructureKind::group) throw UsageError("pr-stats needs a group");
  if (samples == 0) samples = 1000 * a->order();
  Encryption enc = encrypt(a, seed);
  std::vector<CryptoElement> gens;
  for (Index g : a->generators()) gens.push_back(enc.oracle.encrypt(g));
  const BudgetMeter meter(*enc.box);
  const UniformityReport u = uniformity_report(enc.box, gens, samples, burn_in,
                                               derive_seed(seed, 5), kEnumerationCap);
  Outcome o;
  o.config = {{"structure", descriptor}, {"seed", seed}, {"samples", samples},
              {"burn_in", burn_in}};
  o.success = u.p_value > 1e-3;
  o.outcome = o.success ? "success" : "nonuniform";
  o.budget = meter.report();
  o.details["chi_square"] = u.chi_square;
  o.details["p_value"] = u.p_value;
  o.details["degrees_of_freedom"] = u.degrees_of_freedom;
  o.details["group_order"] = u.counts.size();
  o.summary = a->name() + ": chi^2 = " + std::to_string(u.chi_square) +
              ", p = " + std::to_string(u.p_value);
  return o;
}

Outcome recognize(const std::string& spec_text, const std::string& method_name,
                  std::uint64_t seed) {
  const FieldSpec spec = FieldSpec::parse(spec_text);
  const InverseMethod method =
      method_name == "bsgs" ? InverseMethod::bsgs : InverseMethod::table;
  auto field = make_field(spec);
  Encryption enc = encrypt(field, seed);
  const RecognitionResult rec = recognize_field(enc.box, spec, derive_seed(seed, 3), method);

  // beta must respect + and *; exhaustive up to 10^3 elements, sampled above.
  const BudgetMeter meter(*enc.box);
  BlackBoxStructure& k = *enc.box;
  VerificationSummary v;
  const std::size_t q = field->order();
  auto check = [&](Index a, Index b) {
    v.checked += 2;
    if (!k.equal(k.apply(Op::add, rec.beta(a), rec.beta(b)), rec.beta(field->add(a, b)))) {
      ++v.mismatches;
    }
    if (!k.equal(k.apply(Op::mul, rec.beta(a), rec.beta(b)), rec.beta(field->mul(a, b)))) {
      ++v.mismatches;
    }
  };
  if (q <= 1000) {
    for (Index a = 0; a < q; ++a) {
      for (Index b = 0; b < q; ++b) check(a, b);
    }
  } else {
    Rng rng(derive_seed(seed, 13));
    for (int i = 0; i < 10000; ++i) {
      check(static_cast<Index>(uniform_below(rng, q)), static_cast<Index>(uniform_below(rng, q)));
    }
  }

  Outcome o;
  o.config = {{"spec", spec.to_string()}, {"seed", seed}, {"method", std::string(to_string(method))}};
  o.success = v.mismatches == 0;
  o.outcome = o.success ? "success" : "recognition_inconsistency";
  o.budget = rec.cost();
  o.verification = v;
  o.details["minimal_polynomial"] = poly::format(rec.minimal_polynomial());
  o.details["samples_used"] = rec.samples_used();
  o.details["verification_queries"] = budget_json(meter.report());
  o.summary = spec.to_string() + ": recognized with " +
              std::to_string(rec.cost().apply_calls) + " apply calls";
  return o;
}

std::size_t conjugation_mismatches(const S4Fixture& fx, const ProtoInvolution& f) {
  const PermutationGroup& g = *fx.s4;
  std::size_t bad = 0;
  for (Index a = 0; a < g.order(); ++a) {
    const Index conj = g.product(g.product(g.inverse(fx.t), a), fx.t);
    const auto image = f.image(fx.enc.oracle.encrypt(a));
    if (!image || !fx.enc.box->equal(*image, fx.enc.oracle.encrypt(conj))) ++bad;
  }
  return bad;
}

Outcome demo(const std::string& name, std::uint64_t seed) {
  Outcome o;
  o.config = {{"demo", name}, {"seed", seed}};
  if (name == "amalgamate" || name == "reify") {
    const S4Fixture fx = s4_amalgam_fixture(seed);
    const BudgetMeter meter(*fx.enc.box);
    const ProtoInvolution f = amalgamate(fx.parts, derive_seed(seed, 3));
    o.delta = "conjugation by " + fx.s4->element_name(fx.t);
    o.verification.checked = fx.s4->order();
    o.verification.mismatches = conjugation_mismatches(fx, f);
    o.details["amalgam_order"] = f.graph().members().size();
    if (name == "amalgamate") {
      bool rejected = false;
      try {
        const InconsistentFixture bad = inconsistent_fixture(seed);
        amalgamate(bad.parts, derive_seed(seed, 4));
      } catch (const InconsistencyError&) {
        rejected = true;
      }
      o.details["inconsistent_fixture_rejected"] = rejected;
      o.success = o.verification.mismatches == 0 && rejected;
    } else {
      const CryptoElement t = reify(fx.enc.box, f);
      BlackBoxStructure& x = *fx.enc.box;
      const bool involution = x.equal(x.apply(Op::product, t, t), x.apply(Op::identity));
      const bool expected = x.equal(t, fx.enc.oracle.encrypt(fx.t));
      bool not_inner = false;
      try {
        const InversionFixture inv = z3_inversion_fixture(seed);
        reify(inv.enc.box, inv.f);
      } catch (const NotInnerError&) {
        not_inner = true;
      }
      o.details["involution"] = involution;
      o.details["matches_conjugator"] = expected;
      o.details["outer_fixture_not_inner"] = not_inner;
      o.success = o.verification.mismatches == 0 && involution && expected && not_inner;
    }
    o.budget = meter.report();
  } else {
    const InversionFixture inv = z3_inversion_fixture(seed);
    auto aug = augment(inv.f, derive_seed(seed, 3));
    const BudgetMeter meter(*aug);
    std::vector<CryptoElement> gens;
    for (int i = 0; i < 16; ++i) gens.push_back(aug->sample());
    ElementIndex members = close_under(*aug, gens, 1000);
    const std::size_t base = inv.f.graph().members().size();
    const std::size_t order = members.size();
    CryptoElement c = aug->acting()->sample();
    while (aug->acting()->equal(c, aug->acting()->apply(Op::identity))) {
      c = aug->acting()->sample();
    }
    const CryptoElement s = aug->pair(identity_element(*aug->normal()), c);
    const bool swap_involution =
        aug->equal(aug->apply(Op::product, s, s), aug->apply(Op::identity));
    EnumeratedGroup table(aug, std::move(members));
    const FiniteGroupView view = view_of(table);
    const bool is_s3 =
        count_isomorphisms(*PermutationGroup::symmetric(3), view, {}, 1) == 1;
    o.verification.checked = order;
    o.verification.mismatches = is_s3 ? 0 : order;
    o.delta = "swap (x, x') -> (x', x)";
    o.details["base_order"] = base;
    o.details["augmented_order"] = order;
    o.details["swap_squares_to_identity"] = swap_involution;
    o.details["isomorphic_to_s3"] = is_s3;
    o.success = is_s3 && swap_involution && order == 2 * base;
    o.budget = meter.report();
  }
  o.outcome = o.success ? "success" : "recognition_inconsistency";
  o.summary = "demo " + name + ": " + (o.success ? "ok" : "FAILED");
  return o;
}

std::uint64_t resolve_seed(std::uint64_t flag) {
  const char* env = std::getenv("BBA_SEED");
  if (env == nullptr || *env == '\0') return flag;
  try {
    std::size_t used = 0;
    const std::uint64_t v = std::stoull(env, &used, 0);
    if (used != std::string(env).size()) throw std::invalid_argument(env);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("BBA_SEED is not an integer: '") + env + "'");
  }
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Attacks on homomorphic encryption over black-box algebraic structures",
               "bba"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  app.add_option("--seed", cfg.seed, "Seed for all randomness (BBA_SEED overrides)");
  app.add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
  app.add_flag("-v,--verbose", cfg.verbosity, "Print a one-line summary to stderr");

  std::string spec, structure, box_desc, target, method = "table", demo_name;
  std::size_t known_field = 1, known_group = 2, confidence = 40, rounds = 40, samples = 0,
              burn_in = kDefaultBurnIn;
  std::uint64_t n = 0;

  auto* fa = app.add_subcommand("field-attack", "Known-plaintext attack on an encrypted field");
  fa->add_option("--spec", spec, "Field descriptor f:p^n[/modulus]")->required();
  fa->add_option("--known", known_field, "Known plaintext pairs (generator first)")
      ->default_val(1);

  auto* ga = app.add_subcommand("group-attack", "Known-plaintext attack on an encrypted group");
  ga->add_option("--structure", structure, "Group descriptor, e.g. s:4, pgl2-3")->required();
  ga->add_option("--known", known_group, "Known plaintext pairs (generators first)")
      ->default_val(2);

  auto* ve = app.add_subcommand("verify", "Does the encryption of --box encrypt --target?");
  ve->add_option("--box", box_desc, "Structure behind the box")->required();
  ve->add_option("--target", target, "Candidate structure")->required();
  ve->add_option("--confidence", confidence, "Monte-Carlo repetitions")->default_val(40);

  auto* mr = app.add_subcommand("miller-rabin", "Primality via the (Z/nZ)* black box");
  mr->add_option("--n", n, "Odd integer 3 <= n < 2^32")->required();
  mr->add_option("--rounds", rounds, "Witness rounds")->default_val(40);

  auto* pr = app.add_subcommand("pr-stats", "Chi-square uniformity of product replacement");
  pr->add_option("--structure", structure, "Group descriptor")->required();
  pr->add_option("--samples", samples, "Samples (default 1000 |G|)");
  pr->add_option("--burn-in", burn_in, "Burn-in steps")->default_val(kDefaultBurnIn);

  auto* rf = app.add_subcommand("recognize-field", "Recognize an encrypted field");
  rf->add_option("--spec", spec, "Field descriptor f:p^n[/modulus]")->required();
  rf->add_option("--method", method, "Prime-field inverse")
      ->check(CLI::IsMember({"table", "bsgs"}));

  auto* de = app.add_subcommand("demo", "Proto-involution demos");
  de->add_option("name", demo_name, "amalgamate | reify | augment")
      ->required()
      ->check(CLI::IsMember({"amalgamate", "reify", "augment"}));

  std::vector<const char*> argv{"bba"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    cfg.seed = resolve_seed(cfg.seed);
    cfg.known = *fa ? known_field : known_group;
    cfg.subcommand = app.get_subcommands().front()->get_name();
    cfg.structure = !spec.empty() ? spec : structure;
    if (*fa) o = field_attack(spec, known_field, cfg.seed);
    else if (*ga) o = group_attack(structure, known_group, cfg.seed);
    else if (*ve) o = verify(box_desc, target, confidence, cfg.seed);
    else if (*mr) o = miller_rabin(n, rounds, cfg.seed);
    else if (*pr) o = pr_stats(structure, samples, burn_in, cfg.seed);
    else if (*rf) o = recognize(spec, method, cfg.seed);
    else o = demo(demo_name, cfg.seed);
  } catch (const UsageError& e) {
    err << "bba: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "bba: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "bba: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "bba: " << cfg.subcommand << " failed: " << e.what() << "\n";
    return kExitFailure;
  }
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json report;
  report["subcommand"] = cfg.subcommand;
  report["config"] = o.config;
  report["success"] = o.success;
  report["outcome"] = o.outcome;
  report["delta"] = o.delta ? Json(*o.delta) : Json(nullptr);
  report["query_budget"] = budget_json(o.budget);
  report["verification"] = {{"checked", o.verification.checked},
                            {"mismatches", o.verification.mismatches}};
  report["wall_time_s"] = wall;
  report["details"] = o.details;

  const std::string text = report.dump(2) + "\n";
  if (cfg.out.empty()) {
    out << text;
  } else {
    std::ofstream file(cfg.out);
    if (!file) {
      err << "bba: cannot write " << cfg.out << "\n";
      return kExitUsage;
    }
    file << text;
  }
  if (cfg.verbosity > 0 || !cfg.out.empty()) err << o.summary << "\n";
  return o.success ? kExitSuccess : kExitFailure;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace bba::cli
