#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pstab/certificate.hpp"
#include "pstab/classify.hpp"
#include "pstab/compound.hpp"
#include "pstab/fixtures.hpp"
#include "pstab/matrix_io.hpp"
#include "pstab/nest.hpp"
#include "pstab/spectra.hpp"
#include "pstab/stabilize.hpp"

namespace pstab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRefuted = 1;
inline constexpr int kExitInconclusive = 2;
inline constexpr int kExitInput = 3;

inline const std::vector<std::string>& class_names() {
  static const std::vector<std::string> names{"P", "Q", "P2", "Q2", "sign_symmetric", "row_sqdd", "col_sqdd"};
  return names;
}

namespace detail {

inline const Verdict* verdict_for(const ClassReport& r, const std::string& name) {
  if (name == "P") return &r.p;
  if (name == "Q") return &r.q;
  if (name == "P2") return &r.p2;
  if (name == "Q2") return &r.q2;
  if (name == "sign_symmetric") return r.sign_symmetric ? &*r.sign_symmetric : nullptr;
  if (name == "row_sqdd") return &r.row_sqdd;
  if (name == "col_sqdd") return &r.col_sqdd;
  throw ArgumentError("unknown class '" + name + "'");
}

inline std::string join(const std::vector<Rational>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + to_canonical_string(v[i]);
  return s;
}

inline std::string complex_str(std::complex<double> z) {
  std::ostringstream o;
  o << std::setprecision(6) << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return o.str();
}

/// Runs `body`, mapping input problems to exit 3.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << "\n";
  } catch (const nlohmann::json::exception& e) {
    err << "error: malformed JSON: " << e.what() << "\n";
  }
  return kExitInput;
}

}  // namespace detail

/// Exit 0 if every class in `require` holds (all classes by default), 1 otherwise.
inline int cmd_classify(const std::string& path, bool as_json, std::vector<std::string> require, std::ostream& out,
                        std::ostream& err) {
  return detail::guarded(err, [&] {
    const ExactMatrix m = read_matrix_file(path);
    const ClassReport r = classify_full(m);
    const bool defaulted = require.empty();
    if (defaulted) require = class_names();
    bool all = true;
    for (const auto& name : require) {
      const Verdict* v = detail::verdict_for(r, name);
      if (!v) {
        if (defaulted) continue;
        throw ArgumentError("sign_symmetric is only evaluated for n <= " + std::to_string(kMaxSignSymmetryDim));
      }
      all = all && v->holds;
    }
    if (as_json) {
      auto doc = classification_document(m, r);
      doc["required"] = require;
      doc["all_required_hold"] = all;
      out << doc.dump(2) << "\n";
    } else {
      for (const auto& name : class_names()) {
        const Verdict* v = detail::verdict_for(r, name);
        out << std::left << std::setw(16) << name;
        if (!v) {
          out << "n/a (n > " << kMaxSignSymmetryDim << ")\n";
          continue;
        }
        out << (v->holds ? "yes" : "no");
        if (v->witness) out << "   " << v->witness->describe();
        out << "\n";
      }
      out << "order sums         " << detail::join(r.order_sums) << "\n";
      out << "square order sums  " << detail::join(r.square_order_sums) << "\n";
    }
    return all ? kExitOk : kExitRefuted;
  });
}

inline int cmd_compound(const std::string& path, std::size_t order, std::optional<std::size_t> wedge, bool as_json,
                        std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    const ExactMatrix m = read_matrix_file(path);
    const ExactMatrix c = wedge ? generalized_compound(m, order, *wedge).data : compound(m, order).data;
    if (as_json) {
      json sets = json::array();
      for (const auto& s : k_subsets(m.size(), order)) sets.push_back(s.indices());
      json doc = {{"base_n", m.size()}, {"order", order}, {"wedge", wedge ? json(*wedge) : json(nullptr)},
                  {"index_sets", sets}, {"matrix", pstab::detail::matrix_json(c)}};
      out << doc.dump(2) << "\n";
    } else {
      out << format_matrix(c);
    }
    return kExitOk;
  });
}

inline void print_certificate_summary(const StabilityCertificate& c, std::ostream& out) {
  out << "certified: positively stable\n";
  out << "nest tau     ";
  for (auto i : c.nest.tau) out << " " << i;
  out << "\ntheta        ";
  for (auto i : c.transform.theta) out << " " << i;
  out << "\nstabilizer    " << detail::join(c.stabilizer.eps) << "  (" << c.stabilizer.strategy << ")\n";
  out << "ledger        " << c.trace_ledger.entries.size() << " exact entries, k,m >= 1 entries "
      << (c.trace_ledger.hypothesis_positive() ? "positive" : "not positive") << "\n";
  out << "homotopy      proven on [0,1] for orders 1.." << c.homotopy.orders.size() << "\n";
  out << "eigenvalues  ";
  for (const auto& z : c.spectrum_A.eigenvalues) out << "  " << detail::complex_str(z);
  out << "\nwedge margin  " << c.wedge.margin << " (bound " << c.wedge.bound << ")\n";
}

/// Exit 0 certified, 1 hypothesis refuted, 2 inconclusive, 3 input error.
/// `json_out` is a file path, or "-" for stdout.
inline int cmd_certify(const std::string& path, const std::optional<std::string>& json_out,
                       const CertifyOptions& opt, std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&]() -> int {
    const ExactMatrix m = read_matrix_file(path);
    json doc;
    int code = kExitOk;
    try {
      const StabilityCertificate c = certify_stability(m, opt);
      doc = certificate_document(c);
      if (json_out != "-") print_certificate_summary(c, out);
    } catch (const CertificationError& e) {
      std::optional<ClassReport> report;
      if (m.size() <= kMaxClassifyDim) report = classify_full(m);
      doc = failure_document(m, e, report);
      code = e.refutes() ? kExitRefuted : kExitInconclusive;
      if (json_out != "-") {
        out << (e.refutes() ? "refuted" : "inconclusive") << " (" << failure_name(e.kind()) << "): " << e.what()
            << "\n";
        if (e.witness()) out << "witness: " << e.witness()->describe() << "\n";
      }
    }
    if (json_out) {
      if (*json_out == "-") {
        out << doc.dump(2) << "\n";
      } else {
        std::ofstream f(*json_out);
        if (!f) throw ArgumentError("cannot write '" + *json_out + "'");
        f << doc.dump(2) << "\n";
      }
    }
    return code;
  });
}

inline int cmd_verify(const std::string& cert_path, const std::string& matrix_path, std::ostream& out,
                      std::ostream& err) {
  return detail::guarded(err, [&] {
    std::ifstream f(cert_path);
    if (!f) throw ArgumentError("cannot open '" + cert_path + "'");
    const json doc = json::parse(f);
    const ExactMatrix m = read_matrix_file(matrix_path);
    const VerifyResult r = verify_certificate(doc, m);
    (r.ok ? out : err) << (r.ok ? "verified: " : "rejected: ") << r.message << "\n";
    return r.ok ? kExitOk : kExitRefuted;
  });
}

namespace detail {

class DemoReport {
 public:
  explicit DemoReport(std::ostream& out) : out_(out) {}

  void check(const std::string& label, const std::string& expected, const std::string& got, bool pass) {
    out_ << (pass ? "PASS  " : "FAIL  ") << std::left << std::setw(34) << label << " expected " << expected
         << "  got " << got << "\n";
    failures_ += pass ? 0 : 1;
  }
  void value(const std::string& label, const Rational& expected, const Rational& got) {
    check(label, to_canonical_string(expected), to_canonical_string(got), expected == got);
  }
  void matrix(const std::string& label, const ExactMatrix& expected, const ExactMatrix& got) {
    const bool pass = expected == got;
    check(label, std::to_string(expected.size()) + "x" + std::to_string(expected.size()) + " display",
          pass ? "identical" : "differs", pass);
  }
  void flag(const std::string& label, bool expected, bool got) {
    check(label, expected ? "yes" : "no", got ? "yes" : "no", expected == got);
  }
  int failures() const { return failures_; }

 private:
  std::ostream& out_;
  int failures_ = 0;
};

}  // namespace detail

/// Recomputes every printed quantity of the 4x4 worked example.
inline int cmd_demo(std::ostream& out, std::ostream& err) {
  return detail::guarded(err, [&] {
    namespace fx = fixtures;
    detail::DemoReport rep(out);
    const ExactMatrix a = fx::worked_A();
    rep.matrix("A^(2)", fx::worked_A_compound2(), compound(a, 2).data);
    rep.matrix("A^(3)", fx::worked_A_compound3(), compound(a, 3).data);
    rep.value("det A", fx::worked_det_A, det(a));

    const ClassReport r = classify_full(a);
    rep.flag("A is a P-matrix", true, r.p.holds);
    rep.flag("A is sign-symmetric", false, r.sign_symmetric && r.sign_symmetric->holds);
    rep.flag("A is row square dominant", false, r.row_sqdd.holds);
    rep.flag("A is column square dominant", false, r.col_sqdd.holds);

    const ExactMatrix a2 = a * a;
    rep.matrix("A^2", fx::worked_A_squared(), a2);
    rep.matrix("(A^2)^(2)", fx::worked_A_squared_compound2(), compound(a2, 2).data);
    rep.matrix("(A^2)^(3)", fx::worked_A_squared_compound3(), compound(a2, 3).data);
    const auto sums = fx::worked_A_squared_order_sums();
    const char* labels[] = {"Tr(A^2)", "Tr((A^2)^(2))", "Tr((A^2)^(3))", "det(A^2)"};
    for (std::size_t k = 0; k < 4; ++k) rep.value(labels[k], sums[k], r.square_order_sums[k]);
    rep.flag("A is a Q^2-matrix", true, r.q2.holds);

    const auto d = fx::worked_D();
    const ExactMatrix da = ExactMatrix::diagonal(d) * a;
    rep.matrix("DA", fx::worked_DA(), da);
    rep.matrix("(DA)^2", fx::worked_DA_squared(), da * da);
    rep.value("Tr((DA)^2)", fx::worked_trace_DA_squared, trace(da * da));
    const auto qda = is_Q(da * da);
    rep.check("(DA)^2 fails Q at order 1", "order 1",
              qda.witness ? "order " + std::to_string(qda.witness->order) : "holds",
              !qda.holds && qda.witness && qda.witness->order == 1);

    const auto nest = find_q2_nest(a);
    std::string chain_got = "none";
    bool chain_ok = false;
    if (nest) {
      chain_got.clear();
      for (const auto& s : nest->chain) chain_got += s.str();
      std::vector<std::vector<std::size_t>> got;
      for (const auto& s : nest->chain) got.push_back(s.indices());
      chain_ok = got == fx::worked_chain();
    }
    rep.check("Q^2 nest", "{4}{3,4}{2,3,4}{1,2,3,4}", chain_got, chain_ok);

    const ExactMatrix a1 = principal_submatrix(a, IndexSet(4, {2, 3, 4}));
    const ExactMatrix a1sq = a1 * a1;
    rep.matrix("A1", fx::worked_A1(), a1);
    rep.matrix("A1^2", fx::worked_A1_squared(), a1sq);
    rep.matrix("(A1^2)^(2)", fx::worked_A1_squared_compound2(), compound(a1sq, 2).data);
    rep.value("det(A1^2)", fx::worked_det_A1_squared, det(a1sq));
    rep.value("Tr(A1^2)", fx::worked_trace_A1_squared, trace(a1sq));
    rep.value("Tr((A1^2)^(2))", fx::worked_order2_A1_squared, trace(compound(a1sq, 2).data));
    const ExactMatrix a12 = principal_submatrix(a, IndexSet(4, {3, 4}));
    rep.matrix("A12", fx::worked_A12(), a12);
    rep.matrix("A12^2", fx::worked_A12_squared(), a12 * a12);
    rep.value("det(A12^2)", fx::worked_det_A12_squared, det(a12 * a12));
    rep.value("Tr(A12^2)", fx::worked_trace_A12_squared, trace(a12 * a12));

    const Spectrum s = eigenvalues(a);
    const auto match = spectra_match(fx::worked_eigenvalues(), s.eigenvalues, 1e-3);
    std::string got;
    for (const auto& z : s.eigenvalues) got += (got.empty() ? "" : ", ") + detail::complex_str(z);
    rep.check("eigenvalues (1e-3)", "10.1979 +- 2.0302i, 3.80215 +- 6.02751i", got, match.holds);
    rep.flag("A is positively stable", true, is_positively_stable(s));

    bool certified = false;
    try {
      certify_stability(a);
      certified = true;
    } catch (const CertificationError&) {
    }
    rep.flag("stability certificate issued", true, certified);
    out << (rep.failures() == 0 ? "all checks passed\n" : std::to_string(rep.failures()) + " checks failed\n");
    return rep.failures() == 0 ? kExitOk : kExitRefuted;
  });
}

}  // namespace pstab::cli
