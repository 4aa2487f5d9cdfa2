#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>
#include <unistd.h>

#include <mvdecomp/instancegen.hpp>
#include <mvdecomp/serialize.hpp>

#include "support.hpp"

using namespace mvd;
using namespace testsup;
namespace fs = std::filesystem;

namespace {

const std::string kCli = MVD_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("mvd_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run_cli(const std::string& args) {
    const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

} // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("decompose: rank-one file, generated instance, determinism, verify") {
    TempDir dir;

    // generate an exact tensor instance with ground truth
    InstanceSpec spec;
    spec.m = spec.n = 6;
    spec.p = 3;
    spec.ranks = {1, 2};
    spec.seed = 3;
    write_file(dir.file("spec.json"), spec_to_json(spec).dump());
    CHECK(run_cli("generate --input " + dir.file("spec.json") + " --output " +
                  dir.file("t.json") + " --truth " + dir.file("truth.json")) == 0);

    CHECK(run_cli("decompose --input " + dir.file("t.json") + " --output " +
                  dir.file("d.json") + " --seed 5") == 0);

    const json out = json::parse(read_file(dir.file("d.json")));
    CHECK(out.at("report").at("reconstruction_exact").get<bool>());
    CHECK(out.at("report").at("q").get<std::size_t>() == 2);

    // equivalent to the hidden decomposition
    const auto got = decomposition_from_json<Rational>(out);
    const auto hidden =
        decomposition_from_json<Rational>(json::parse(read_file(dir.file("truth.json"))));
    CHECK(equivalent(got, hidden));

    // byte-identical re-run
    CHECK(run_cli("decompose --input " + dir.file("t.json") + " --output " +
                  dir.file("d2.json") + " --seed 5") == 0);
    CHECK(read_file(dir.file("d.json")) == read_file(dir.file("d2.json")));

    // verify accepts the decompose output
    CHECK(run_cli("verify --input " + dir.file("t.json") + " --decomposition " +
                  dir.file("d.json") + " --output " + dir.file("v.json")) == 0);
    CHECK(json::parse(read_file(dir.file("v.json"))).at("ok").get<bool>());

    // verify rejects a corrupted claim
    json bad = out;
    bad["terms"][0]["M"][0][0] = "9999";
    write_file(dir.file("bad.json"), bad.dump());
    CHECK(run_cli("verify --input " + dir.file("t.json") + " --decomposition " +
                  dir.file("bad.json")) == 2);
}

TEST_CASE("rank-one tensor decomposes to a single term") {
    TempDir dir;
    const auto m = outer_product(qvec({1, 2}), qvec({3, 1}));
    const MatrixVectorDecomposition<Rational> hidden({{m, qvec({2, 1})}});
    const auto t = reconstruct(hidden, 2, 2, 2);
    write_file(dir.file("t.json"), tensor_to_json(t).dump());
    CHECK(run_cli("decompose --input " + dir.file("t.json") + " --output " +
                  dir.file("d.json")) == 0);
    const json out = json::parse(read_file(dir.file("d.json")));
    CHECK(out.at("terms").size() == 1);
    CHECK(out.at("report").at("rank").get<std::size_t>() == 1);
}

TEST_CASE("malformed input exits 1") {
    TempDir dir;
    write_file(dir.file("junk.json"), "{not json");
    CHECK(run_cli("decompose --input " + dir.file("junk.json")) == 1);
    CHECK(run_cli("decompose --input " + dir.file("missing.json")) == 1);
    // mode mismatch between flag and file content
    write_file(dir.file("t.json"),
               tensor_to_json(Tensor3<Rational>(2, 2, 2)).dump());
    CHECK(run_cli("decompose --mode float --input " + dir.file("t.json")) == 1);
}

TEST_CASE("minrank: coordinate basis, dependent list") {
    TempDir dir;
    const auto e11 = Matrix<Rational>::from_rows({{1, 0}, {0, 0}});
    const auto e22 = Matrix<Rational>::from_rows({{0, 0}, {0, 1}});
    write_file(dir.file("basis.json"), basis_to_json<Rational>({e11, e22}).dump());
    CHECK(run_cli("minrank --input " + dir.file("basis.json") + " --output " +
                  dir.file("r.json")) == 0);
    const json out = json::parse(read_file(dir.file("r.json")));
    CHECK(out.at("rho").get<std::size_t>() == 1);
    CHECK(out.at("certificate").at("p_equals_q").get<bool>());

    // dependent list: third matrix in the span of the first two
    write_file(dir.file("dep.json"),
               basis_to_json<Rational>({e11, e22, e11 + e22}).dump());
    CHECK(run_cli("minrank --input " + dir.file("dep.json") + " --output " +
                  dir.file("rd.json")) == 2);
    const json dep = json::parse(read_file(dir.file("rd.json")));
    CHECK_FALSE(dep.at("certificate").at("p_equals_q").get<bool>());
}

TEST_CASE("jennrich: success and degenerate spectrum") {
    TempDir dir;
    InstanceSpec spec;
    spec.m = spec.n = spec.p = 5;
    spec.ranks = {1, 1, 1};
    spec.seed = 9;
    spec.mode = "float";
    const auto inst = gen_instance<double>(spec);
    write_file(dir.file("t.json"), tensor_to_json(inst.tensor).dump());
    CHECK(run_cli("jennrich --input " + dir.file("t.json") + " --output " +
                  dir.file("j.json")) == 0);
    const json out = json::parse(read_file(dir.file("j.json")));
    CHECK(out.at("residual").get<double>() < 1e-6);

    const auto colin = gen_colinear_w_instance<double>(5, 5, 4, 3, 21);
    write_file(dir.file("colin.json"), tensor_to_json(colin.tensor).dump());
    CHECK(run_cli("jennrich --input " + dir.file("colin.json")) == 2);

    // float decompose output is accepted by verify
    CHECK(run_cli("decompose --input " + dir.file("t.json") + " --output " +
                  dir.file("fd.json")) == 0);
    CHECK(run_cli("verify --input " + dir.file("t.json") + " --decomposition " +
                  dir.file("fd.json")) == 0);
}

TEST_CASE("generate: basis kind and seed override") {
    TempDir dir;
    InstanceSpec spec;
    spec.m = spec.n = 6;
    spec.p = 2;
    spec.ranks = {1, 2};
    spec.seed = 4;
    write_file(dir.file("spec.json"), spec_to_json(spec).dump());
    CHECK(run_cli("generate --kind basis --input " + dir.file("spec.json") +
                  " --output " + dir.file("b.json") + " --truth " +
                  dir.file("bt.json")) == 0);
    const auto basis =
        basis_from_json<Rational>(json::parse(read_file(dir.file("b.json"))));
    CHECK(basis.size() == 2);
    const json truth = json::parse(read_file(dir.file("bt.json")));
    CHECK(truth.contains("mixing"));

    // an explicit --seed overrides the spec seed
    CHECK(run_cli("generate --input " + dir.file("spec.json") + " --seed 99 --output " +
                  dir.file("t99.json")) == 0);
    CHECK(run_cli("generate --input " + dir.file("spec.json") + " --output " +
                  dir.file("t4.json")) == 0);
    CHECK(read_file(dir.file("t99.json")) != read_file(dir.file("t4.json")));
}

TEST_SUITE_END();
