#include <gtest/gtest.h>

#include <sstream>

#include "supercalc/cli.hpp"
#include "support.hpp"

using namespace supercalc;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args, const std::string& input = "") {
  args.insert(args.begin(), "supercalc");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::istringstream in(input);
  std::ostringstream out, err;
  const int code = cli::main(static_cast<int>(argv.size()), argv.data(), in, out, err);
  return {code, out.str(), err.str()};
}

const std::vector<std::string> kGolden{"pullback", "--q", "2", "--odd", "psi1,psi2", "--even", "phi,F",
                                       "--field", "phi + theta1*psi1 + theta2*psi2 + theta1*theta2*F", "--f", "f"};

}  // namespace

TEST(Cli, GoldenPullbackText) {
  const Outcome r = invoke(kGolden);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "f + theta1*psi1*f' + theta1*theta2*F*f' - theta1*theta2*psi1*psi2*f'' + theta2*psi2*f'\n");
}

TEST(Cli, BerezinReadsPreviousOutputFromStdin) {
  const Outcome pulled = invoke(kGolden);
  const Outcome r = invoke({"berezin", "--q", "2", "--odd", "psi1,psi2", "--even", "phi,F", "--expr", "-", "--vars", "1,2"},
                           pulled.out);
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "F*f' - psi1*psi2*f''\n");
}

TEST(Cli, JsonTermsAreSortedAndStable) {
  std::vector<std::string> args = kGolden;
  args.insert(args.end(), {"--format", "json"});
  const Outcome a = invoke(args), b = invoke(args);
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  const auto j = nlohmann::json::parse(a.out);
  EXPECT_EQ(j["kind"], "superscalar");
  ASSERT_EQ(j["terms"].size(), 5u);
  std::vector<std::vector<int>> gens;
  for (const auto& t : j["terms"]) gens.push_back(t["generators"].get<std::vector<int>>());
  EXPECT_TRUE(std::is_sorted(gens.begin(), gens.end()));
  const auto& minus = j["terms"][3];
  EXPECT_EQ(minus["coefficient"], "-1");
  EXPECT_EQ(minus["odd"], nlohmann::json({"psi1", "psi2"}));
  EXPECT_EQ(minus["functions"][0]["order"], nlohmann::json({2}));
}

TEST(Cli, TextOutputParsesBackToTheSameValue) {
  cli::Request req;
  req.command = "pullback";
  req.L = 4;
  req.even = {"a", "b"};
  req.fields = {"a + 3/2*eta1*eta2*b - eta1*eta2*eta3*eta4", "b - eta3*eta4*a"};
  req.function = "g";
  const cli::Response resp = cli::run(req);
  SymbolTable t(GeneratorSet{0, 4});
  t.declare("a", Parity::even);
  t.declare("b", Parity::even);
  t.declare_function("g", 2);
  const SuperScalar value = parse_superscalar(resp.value, t);
  EXPECT_EQ(to_string(value, t.context()), resp.value);
  EXPECT_EQ(cli::terms_of(value).size(), resp.terms.size());
}

TEST(Cli, ReconstructFeedsExpExpand) {
  const std::vector<std::string> common{"--L", "4", "--even", "a,b"};
  const std::string field = "a + eta1*eta2*b + eta1*eta3 - 2*eta1*eta2*eta3*eta4*a";
  auto with = [&](std::vector<std::string> args) {
    args.insert(args.end(), common.begin(), common.end());
    return args;
  };
  const Outcome xi = invoke(with({"reconstruct", "--field", field}));
  ASSERT_EQ(xi.code, 0) << xi.err;
  EXPECT_EQ(xi.out, "{1,2}=b\n{1,2,3,4}=-2*a\n{1,3}=1\n");

  std::vector<std::string> expand = with({"exp-expand"});
  std::istringstream lines(xi.out);
  for (std::string line; std::getline(lines, line);) expand.insert(expand.end(), {"--xi", line});
  const Outcome a = invoke(expand);
  const Outcome b = invoke(with({"pullback", "--field", field}));
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, DOperatorCommands) {
  EXPECT_EQ(invoke({"ideal-check", "--q", "4", "--poly", "s{1,2}*s{3,4} - s{1,2,3,4}"}).out, "true\n");
  EXPECT_EQ(invoke({"ideal-check", "--q", "4", "--poly", "s{1,3}*s{2,4}"}).out, "false\nD(1,2,3,4): -1\n");
  EXPECT_EQ(invoke({"dop", "--q", "4", "--poly", "s{1,3}*s{2,4} + 1/2", "--index", "1,2,3,4"}).out, "-1\n");
  EXPECT_EQ(invoke({"dop", "--q", "4", "--poly", "s{1,3}*s{2,4} + 1/2"}).out, "1/2\n");
  EXPECT_EQ(invoke({"iso", "--q", "4", "--poly", "s{1,3}*s{2,4} + s{1,2}"}).out,
            "theta1*theta2 - theta1*theta2*theta3*theta4\n");
  EXPECT_EQ(invoke({"chain-check", "--q", "4", "--F", "y1^2*y2", "--Y", "1+s{1,2}", "--Y", "2 + s{3,4}", "--index",
                    "1,2,3,4"})
                .out,
            "true\nlhs: 2\nrhs: 2\n");
  EXPECT_EQ(invoke({"tq-check", "--q", "4", "--S", "{1,2}=s{1,2} + s{1,2}*s{3,4} - s{1,2,3,4}"}).out, "true\n");
  EXPECT_EQ(invoke({"tq-check", "--q", "4", "--S", "{1,2}=s{1,2} + s{3,4}"}).out, "false\n");
}

TEST(Cli, OracleCompare) {
  const Outcome r = invoke({"oracle-compare", "--q", "2", "--L", "2", "--odd", "psi1,psi2", "--even", "phi,F", "--field",
                            "phi + theta1*psi1 + theta2*psi2 + theta1*theta2*F", "--fn", "sin", "--bind", "phi=0.3",
                            "--bind", "F=1.5", "--bind-odd", "psi1=eta1", "--bind-odd", "psi2=eta2+2*eta1"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.substr(0, 5), "true\n");

  const Outcome poly = invoke({"oracle-compare", "--even", "a", "--L", "2", "--field", "a + eta1*eta2", "--fn",
                               "poly:y1^3", "--bind", "a=2"});
  EXPECT_EQ(poly.out, "true\n(): 8 8\n(1,2): 12 12\n");
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(invoke({"pullback", "--q", "1", "--field", "x"}).code, 2);
  EXPECT_EQ(invoke({"pullback", "--q", "1", "--field", "(theta1"}).code, 2);
  EXPECT_EQ(invoke({"frobnicate"}).code, 2);
  EXPECT_EQ(invoke({"pullback", "--q", "many"}).code, 2);
  EXPECT_EQ(invoke({"pullback", "--format", "xml", "--field", "1"}).code, 2);
  EXPECT_EQ(invoke({"pullback", "--q", "1", "--field", "theta2"}).code, 3);
  EXPECT_EQ(invoke({"pullback", "--q", "1", "--field", "theta1"}).code, 3);
  EXPECT_EQ(invoke({"pullback"}).code, 3);
  EXPECT_EQ(invoke({"pullback", "--field", "1", "--field", "2", "--F", "y3"}).code, 3);
  EXPECT_EQ(invoke({"dop", "--q", "12", "--poly", "1"}).code, 3);
  EXPECT_EQ(invoke({"dop", "--q", "4", "--poly", "1", "--index", "1,2,3"}).code, 3);
  EXPECT_EQ(invoke({"dop", "--q", "4", "--poly", "1", "--index", "2,1"}).code, 2);
  EXPECT_EQ(invoke({"exp-expand", "--L", "2", "--xi", "{1}=1"}).code, 3);
  EXPECT_EQ(invoke({"exp-expand", "--L", "2", "--xi", "1,2=1"}).code, 2);
  EXPECT_EQ(invoke({"reconstruct", "--q", "2", "--odd", "psi", "--field", "theta1*psi"}).code, 3);
  EXPECT_EQ(invoke({"oracle-compare", "--even", "a", "--field", "a"}).code, 3);
  EXPECT_EQ(invoke({"pullback", "--odd", "theta1", "--field", "1"}).code, 3);
  const Outcome help = invoke({"--help"});
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("--field"), std::string::npos);
  const Outcome bad = invoke({"pullback", "--q", "1", "--field", "theta1 + y"});
  EXPECT_NE(bad.err.find("parse error at 9"), std::string::npos) << bad.err;
}
