#pragma once

#include <cstddef>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include <openssl/evp.h>

#include "pstab/classify.hpp"
#include "pstab/matrix.hpp"
#include "pstab/matrix_io.hpp"
#include "pstab/nest.hpp"
#include "pstab/rational.hpp"
#include "pstab/spectra.hpp"
#include "pstab/stabilize.hpp"

namespace pstab {

inline constexpr const char* kToolName = "pstab";
inline constexpr const char* kToolVersion = "0.1.0";

using json = nlohmann::ordered_json;

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

/// Hash of the canonical text form, so equal matrices hash equally however
/// their files were spelled.
inline std::string matrix_hash(const ExactMatrix& m) { return sha256_hex(format_matrix(m)); }

namespace detail {

inline json matrix_json(const ExactMatrix& m) {
  json rows = json::array();
  for (std::size_t r = 0; r < m.size(); ++r) {
    json row = json::array();
    for (std::size_t c = 0; c < m.size(); ++c) row.push_back(to_fraction_string(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline json rationals_json(const std::vector<Rational>& v) {
  json a = json::array();
  for (const auto& q : v) a.push_back(to_fraction_string(q));
  return a;
}

inline json set_json(const IndexSet& s) { return json(s.indices()); }

inline json witness_json(const Witness& w) {
  json j = {{"order", w.order}, {"on_square", w.on_square}, {"value", to_fraction_string(w.value)}};
  if (w.rows) j["rows"] = set_json(*w.rows);
  if (w.cols) j["cols"] = set_json(*w.cols);
  return j;
}

inline json verdict_json(const Verdict& v) {
  json j = {{"holds", v.holds}};
  if (v.witness) j["witness"] = witness_json(*v.witness);
  return j;
}

inline json classification_json(const ClassReport& r) {
  json j;
  j["P"] = verdict_json(r.p);
  j["Q"] = verdict_json(r.q);
  j["P2"] = verdict_json(r.p2);
  j["Q2"] = verdict_json(r.q2);
  j["sign_symmetric"] = r.sign_symmetric ? verdict_json(*r.sign_symmetric) : json(nullptr);
  j["row_sqdd"] = verdict_json(r.row_sqdd);
  j["col_sqdd"] = verdict_json(r.col_sqdd);
  j["order_sums"] = rationals_json(r.order_sums);
  j["square_order_sums"] = rationals_json(r.square_order_sums);
  return j;
}

inline json spectrum_json(const Spectrum& s) {
  json a = json::array();
  for (const auto& z : s.eigenvalues) a.push_back({{"re", z.real()}, {"im", z.imag()}});
  return a;
}

inline json input_json(const ExactMatrix& m) {
  return {{"n", m.size()}, {"matrix", matrix_json(m)}, {"sha256", matrix_hash(m)}};
}

inline json tool_json() { return {{"name", kToolName}, {"version", kToolVersion}}; }

}  // namespace detail

inline json classification_document(const ExactMatrix& m, const ClassReport& r) {
  return {{"tool", detail::tool_json()}, {"input", detail::input_json(m)},
          {"classification", detail::classification_json(r)}};
}

inline json certificate_document(const StabilityCertificate& c) {
  using namespace detail;
  json doc;
  doc["tool"] = tool_json();
  doc["input"] = input_json(c.A);
  doc["exact_sections"] = {"input", "classification", "nest", "transform", "block_traces", "stabilizer",
                           "trace_ledger", "homotopy"};
  doc["classification"] = classification_json(c.report);

  json chain = json::array(), evidence = json::array();
  for (const auto& s : c.nest.chain) chain.push_back(set_json(s));
  for (const auto& e : c.nest.evidence)
    evidence.push_back({{"set", set_json(e.set)},
                        {"order_sums", rationals_json(e.order_sums)},
                        {"square_order_sums", rationals_json(e.square_order_sums)}});
  doc["nest"] = {{"chain", chain}, {"tau", c.nest.tau}, {"evidence", evidence}};
  doc["transform"] = {{"theta", c.transform.theta}, {"B", matrix_json(c.transform.B)}};

  json bt = json::array();
  for (const auto& [key, v] : c.block_trace_values)
    bt.push_back({{"j", key.first}, {"m", key.second}, {"value", to_fraction_string(v)}});
  doc["block_traces"] = bt;

  doc["stabilizer"] = {{"eps", rationals_json(c.stabilizer.eps)},
                       {"ordering", c.stabilizer.ordering},
                       {"shrink_log", c.stabilizer.shrink_log},
                       {"strategy", c.stabilizer.strategy}};

  json entries = json::array();
  for (const auto& [key, v] : c.trace_ledger.entries)
    entries.push_back({{"j", key.j}, {"k", key.k}, {"m", key.m}, {"value", to_fraction_string(v)}});
  doc["trace_ledger"] = {{"hypothesis_positive", c.trace_ledger.hypothesis_positive()}, {"entries", entries}};

  json orders = json::array();
  for (const auto& o : c.homotopy.orders)
    orders.push_back({{"j", o.j},
                      {"coefficients", rationals_json(o.coefficients)},
                      {"status", homotopy_status_name(o.status)},
                      {"pieces", o.pieces},
                      {"max_depth", o.max_depth}});
  doc["homotopy"] = {{"basis", "t^(2j-s) (1-t)^s"}, {"orders", orders}};

  doc["spectrum"] = {{"numeric", true},
                     {"method", c.spectrum_A.method},
                     {"A", spectrum_json(c.spectrum_A)},
                     {"DB", spectrum_json(c.spectrum_DB)},
                     {"tolerances",
                      {{"tol_imag", c.tolerances.tol_imag},
                       {"tol_pos", c.tolerances.tol_pos},
                       {"tol_sep", c.tolerances.tol_sep},
                       {"backward", c.spectrum_A.tol_backward},
                       {"wedge_slack", c.spectral_slack}}},
                     {"wedge", {{"kind", "sharpened"}, {"bound", c.wedge.bound}, {"margin", c.wedge.margin}}}};
  doc["verdict"] = "certified";
  return doc;
}

/// Document for a run that did not certify. The classification is included
/// when it could be computed.
inline json failure_document(const ExactMatrix& m, const CertificationError& e,
                             const std::optional<ClassReport>& report) {
  json doc;
  doc["tool"] = detail::tool_json();
  doc["input"] = detail::input_json(m);
  if (report) doc["classification"] = detail::classification_json(*report);
  doc["verdict"] = e.refutes() ? "refuted" : "inconclusive";
  json f = {{"kind", failure_name(e.kind())}, {"message", e.what()}};
  if (e.witness()) f["witness"] = detail::witness_json(*e.witness());
  doc["failure"] = f;
  return doc;
}

// ---------------------------------------------------------------------------
// Re-verification

struct VerifyResult {
  bool ok = false;
  std::string message;
};

namespace detail {

struct Mismatch {
  std::string what;
};

inline std::vector<std::size_t> index_list(const json& j) { return j.get<std::vector<std::size_t>>(); }

inline Rational rational_field(const json& j) { return parse_rational(j.get<std::string>()); }

inline ExactMatrix matrix_field(const json& rows) {
  std::vector<std::vector<Rational>> v;
  for (const auto& row : rows) {
    std::vector<Rational> r;
    for (const auto& x : row) r.push_back(rational_field(x));
    v.push_back(std::move(r));
  }
  return ExactMatrix::from_rows(v);
}

inline void expect(bool cond, const std::string& what) {
  if (!cond) throw Mismatch{what};
}

inline void check_flag(const json& doc, const char* name, const Verdict& v) {
  expect(doc.at(name).at("holds").get<bool>() == v.holds, std::string("classification flag ") + name);
}

}  // namespace detail

/// Recomputes every exact claim of a certificate from the matrix alone and
/// reports the first that does not reproduce. Spectra are not re-checked.
inline VerifyResult verify_certificate(const json& doc, const ExactMatrix& a) {
  using namespace detail;
  try {
    const auto& in = doc.at("input");
    expect(in.at("sha256").get<std::string>() == matrix_hash(a), "input hash mismatch");
    expect(matrix_field(in.at("matrix")) == a, "input matrix differs");
    expect(doc.at("verdict").get<std::string>() == "certified", "document does not claim a certificate");

    const ClassReport r = classify_full(a);
    const auto& cl = doc.at("classification");
    check_flag(cl, "P", r.p);
    check_flag(cl, "Q", r.q);
    check_flag(cl, "P2", r.p2);
    check_flag(cl, "Q2", r.q2);
    check_flag(cl, "row_sqdd", r.row_sqdd);
    check_flag(cl, "col_sqdd", r.col_sqdd);
    if (r.sign_symmetric) check_flag(cl, "sign_symmetric", *r.sign_symmetric);
    expect(r.p.holds && r.q2.holds, "matrix is not P and Q^2");

    const std::size_t n = a.size();
    std::vector<IndexSet> chain;
    for (const auto& s : doc.at("nest").at("chain")) chain.emplace_back(n, index_list(s));
    const auto nv = verify_nest(a, chain);
    expect(nv.ok(), "nest chain fails at level " + (nv.violation ? std::to_string(nv.violation->level) : ""));
    const auto tau = tau_from_chain(chain);
    expect(index_list(doc.at("nest").at("tau")) == tau, "nest tau disagrees with chain");

    const auto theta = theta_from_tau(tau);
    expect(index_list(doc.at("transform").at("theta")) == theta, "transform theta");
    const ExactMatrix b = permutation_similarity(inverse(a), theta);
    expect(matrix_field(doc.at("transform").at("B")) == b, "transform B");

    const auto bt = block_traces(b);
    expect(doc.at("block_traces").size() == bt.size(), "block_traces incomplete");
    for (const auto& e : doc.at("block_traces")) {
      const std::pair<std::size_t, std::size_t> key{e.at("j").get<std::size_t>(), e.at("m").get<std::size_t>()};
      const std::string name = "block_traces entry (" + std::to_string(key.first) + "," + std::to_string(key.second) + ")";
      expect(bt.count(key) && bt.at(key) == rational_field(e.at("value")), name);
      expect(bt.at(key).sign() > 0, name + " not positive");
    }

    const auto& st = doc.at("stabilizer");
    std::vector<Rational> eps;
    for (const auto& x : st.at("eps")) eps.push_back(rational_field(x));
    expect(eps.size() == n, "stabilizer length");
    const auto ordering = index_list(st.at("ordering"));
    require_permutation(ordering, n);
    expect(eps[ordering[0] - 1] == 1, "stabilizer does not start at 1");
    for (std::size_t i = 0; i + 1 < n; ++i)
      expect(eps[ordering[i] - 1] > eps[ordering[i + 1] - 1], "stabilizer not decreasing along its ordering");
    expect(eps[ordering[n - 1] - 1].sign() > 0, "stabilizer not positive");

    const TraceLedger ledger = LedgerEvaluator(b).ledger(eps);
    const auto& entries = doc.at("trace_ledger").at("entries");
    expect(entries.size() == ledger.entries.size(), "trace_ledger incomplete");
    for (const auto& e : entries) {
      const LedgerKey key{e.at("j").get<std::size_t>(), e.at("k").get<std::size_t>(), e.at("m").get<std::size_t>()};
      auto it = ledger.entries.find(key);
      expect(it != ledger.entries.end() && it->second == rational_field(e.at("value")),
             "trace_ledger entry " + key.str());
    }
    expect(doc.at("trace_ledger").at("hypothesis_positive").get<bool>() == ledger.hypothesis_positive(),
           "trace_ledger hypothesis flag");

    const HomotopyProof proof = prove_homotopy(ledger);
    const auto& orders = doc.at("homotopy").at("orders");
    expect(orders.size() == proof.orders.size(), "homotopy orders incomplete");
    for (std::size_t i = 0; i < orders.size(); ++i) {
      const auto& o = proof.orders[i];
      const std::string name = "homotopy order " + std::to_string(o.j);
      std::vector<Rational> coeffs;
      for (const auto& x : orders[i].at("coefficients")) coeffs.push_back(rational_field(x));
      expect(coeffs == o.coefficients, name + " coefficients");
      expect(o.status == HomotopyStatus::proven, name + " is not proven positive");
    }
  } catch (const Mismatch& m) {
    return {false, m.what};
  } catch (const nlohmann::json::exception& e) {
    return {false, std::string("malformed certificate: ") + e.what()};
  } catch (const std::exception& e) {
    return {false, std::string("certificate rejected: ") + e.what()};
  }
  return {true, "all exact claims re-verified"};
}

}  // namespace pstab
