// nzext: command-line frontend.
//
//   nzext check   --algebra A.toml --subcat M.toml --n 2 [--out cert.json] [--depth D] [--jobs J] [--seed S]
//   nzext search  --algebra A.toml --n 2 [--nz] [--jobs J]
//   nzext rectify --algebra A.toml --subcat M.toml --n 2 --ext X.toml [--out seq.json] [--seed S]
//   nzext splice  --algebra A.toml --subcat M.toml --n 2 --k 2 --ext X.toml [--out seq.json] [--seed S]
//
// Exit codes: 0 positive verdict / success, 2 negative verdict or refused hypothesis,
// 1 input error, 3 internal error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "nzext/io.hpp"
#include "nzext/nzext.hpp"

namespace {

using nzext::io::json;

constexpr int kOk = 0, kInput = 1, kNegative = 2, kInternal = 3;

struct Args {
  std::string algebra, subcat, ext, out, format = "json";
  std::size_t n = 1, k = 2;
  std::optional<std::size_t> depth;
  bool nz = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
};

void emit(const json& doc, const std::string& out) {
  if (out.empty() || out == "-") {
    std::cout << doc.dump(2) << '\n';
    return;
  }
  std::ofstream os(out);
  if (!os) throw nzext::InputError("cannot write '" + out + "'");
  os << doc.dump(2) << '\n';
}

template <class F>
nzext::Subcategory<F> load_subcat(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  if (a.subcat.empty()) throw nzext::InputError("--subcat is required");
  return nzext::io::subcategory_from_json(alg, nzext::io::load_document(a.subcat));
}

template <class F>
json sequence_json(const nzext::NExactSeq<F>& s, const std::vector<nzext::Module<F>>& catalog) {
  auto j = nzext::io::complex_json(s.complex(), &catalog);
  j["class"] = nzext::io::class_json(nzext::yoneda_class(s), &catalog);
  return j;
}

template <class F>
int cmd_check(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  auto m = load_subcat(alg, a);
  nzext::CertifyOptions opt;
  opt.depth = a.depth;
  opt.jobs = a.jobs;
  opt.seed = a.seed;
  auto cert = nzext::certify(m, a.n, opt);
  emit(cert.document, a.out);
  std::cerr << "verdict: " << cert.document.at("verdict").template get<std::string>() << '\n';
  return cert.positive ? kOk : kNegative;
}

template <class F>
int cmd_search(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  if (a.n == 0) throw nzext::InputError("n must be positive");
  nzext::SearchOptions<F> opt;
  opt.n = a.n;
  opt.require_nZ = a.nz;
  opt.jobs = a.jobs;
  for (const auto& m : nzext::search_cluster_tilting(alg, opt)) {
    auto names = m.names();
    std::sort(names.begin(), names.end());
    std::string line;
    for (const auto& s : names) line += (line.empty() ? "" : ",") + s;
    std::cout << line << '\n';
  }
  return kOk;
}

template <class F>
nzext::Complex<F> load_ext(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  if (a.ext.empty()) throw nzext::InputError("--ext is required");
  return nzext::io::extension_from_json(alg, nzext::io::load_document(a.ext));
}

template <class F>
int cmd_rectify(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  auto ctx = nzext::analyze(load_subcat(alg, a), a.n);
  auto x = load_ext(alg, a);
  auto out = nzext::rectify(ctx, x, a.seed);
  auto catalog = nzext::catalog_or_empty(alg);
  json doc{{"command", "rectify"}, {"n", a.n}, {"input_class", nzext::io::class_json(nzext::class_of_extension(x), &catalog)},
           {"sequences", json::array({sequence_json(out, catalog)})}};
  bool in_m = true;
  for (const auto& t : x.terms()) in_m = in_m && nzext::in_add(ctx.m, t);
  if (in_m) doc["homotopy_equivalent_to_input"] = nzext::homotopy_equivalent(x, out.complex(), true).has_value();
  emit(doc, a.out);
  return kOk;
}

template <class F>
int cmd_splice(const nzext::AlgebraPtr<F>& alg, const Args& a) {
  auto ctx = nzext::analyze(load_subcat(alg, a), a.n);
  auto x = load_ext(alg, a);
  auto parts = nzext::splice_decompose(ctx, x, a.k, a.seed);
  auto catalog = nzext::catalog_or_empty(alg);
  json seqs = json::array();
  for (const auto& p : parts) seqs.push_back(sequence_json(p, catalog));
  json doc{{"command", "splice"}, {"n", a.n}, {"k", a.k}, {"input_class", nzext::io::class_json(nzext::class_of_extension(x), &catalog)},
           {"sequences", seqs}, {"spliced_class", nzext::io::class_json(nzext::spliced_class(parts), &catalog)}};
  emit(doc, a.out);
  return kOk;
}

template <class F>
int run(const F& f, const json& algdoc, const std::string& cmd, const Args& a) {
  auto alg = nzext::io::algebra_from_json(f, algdoc);
  if (cmd == "check") return cmd_check(alg, a);
  if (cmd == "search") return cmd_search(alg, a);
  if (cmd == "rectify") return cmd_rectify(alg, a);
  return cmd_splice(alg, a);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nZ-cluster tilting and n-exact sequence toolkit"};
  app.set_version_flag("--version", std::string(nzext::kVersion));
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--algebra", a.algebra, "algebra spec (TOML or JSON)")->required();
    sub->add_option("--n", a.n, "n")->required();
    sub->add_option("--jobs", a.jobs, "worker threads");
    sub->add_option("--seed", a.seed, "seed for randomized choices");
    sub->add_option("--format", a.format, "output format")->check(CLI::IsMember({"json"}));
  };
  auto* check = app.add_subcommand("check", "certify an n-cluster tilting / nZ candidate");
  common(check);
  check->add_option("--subcat", a.subcat, "subcategory spec")->required();
  check->add_option("--out", a.out, "certificate file (default stdout)");
  check->add_option("--depth", a.depth, "number of Ext^{kn} rows in the long exact sequences");

  auto* search = app.add_subcommand("search", "list n-cluster tilting subcategories");
  common(search);
  search->add_flag("--nz", a.nz, "only nZ-cluster tilting ones");

  auto* rect = app.add_subcommand("rectify", "replace an n-fold extension by an n-exact sequence in M");
  common(rect);
  rect->add_option("--subcat", a.subcat, "subcategory spec")->required();
  rect->add_option("--ext", a.ext, "extension literal")->required();
  rect->add_option("--out", a.out, "output file (default stdout)");

  auto* spl = app.add_subcommand("splice", "decompose a kn-fold extension into k n-exact sequences");
  common(spl);
  spl->add_option("--subcat", a.subcat, "subcategory spec")->required();
  spl->add_option("--ext", a.ext, "extension literal")->required();
  spl->add_option("--k", a.k, "number of pieces");
  spl->add_option("--out", a.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }
  std::string cmd = app.get_subcommands().front()->get_name();

  try {
    auto algdoc = nzext::io::load_document(a.algebra);
    auto field = nzext::io::field_from_json(algdoc);
    return std::visit([&](const auto& f) { return run(f, algdoc, cmd, a); }, field);
  } catch (const nzext::NotAnExtension& e) {
    std::cerr << "nzext: " << e.what() << " (position " << e.position() << ")\n";
    return kInput;
  } catch (const nzext::Refused& e) {
    std::cerr << "nzext: refused: " << e.what() << '\n';
    return kNegative;
  } catch (const nzext::InputError& e) {
    std::cerr << "nzext: " << e.what() << '\n';
    return kInput;
  } catch (const nzext::InvalidModule& e) {
    std::cerr << "nzext: " << e.what() << '\n';
    return kInput;
  } catch (const nzext::UnsupportedEnumeration& e) {
    std::cerr << "nzext: " << e.what() << '\n';
    return kInput;
  } catch (const nzext::DimensionMismatch& e) {
    std::cerr << "nzext: " << e.what() << '\n';
    return kInput;
  } catch (const json::exception& e) {
    std::cerr << "nzext: malformed document: " << e.what() << '\n';
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "nzext: internal error: " << e.what() << '\n';
    return kInternal;
  }
}
