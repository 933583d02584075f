#include <gtest/gtest.h>
#include <httplib.h>
#include <json.hpp>

#include <array>
#include <cstdio>
#include <fstream>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

namespace {

struct Run {
    int code = -1;
    std::string out;
};

// Runs the CLI with stderr folded into stdout.
Run cli(const std::string& args, const std::string& env = "") {
    Run r;
    std::string cmd = env + " " + std::string(SPECTRA_CLI) + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string write(const std::string& name, const std::string& text) {
    const std::string path = ::testing::TempDir() + "/" + name;
    std::ofstream(path) << text;
    return path;
}

const std::string unreal = "spec U\nenv boolean x;\nsys boolean y;\ngar a: ini y;\ngar b: ini !y;\ngar c: alwEv y;\n";
const std::string mirror = "spec M env boolean x; sys boolean y;\ngar alw y <-> x;\n";

// Background server process whose first output line announces the port.
class Server {
public:
    explicit Server(const std::vector<std::string>& args) {
        int fds[2];
        if (pipe(fds) != 0)
            throw std::runtime_error("pipe");
        pid_ = fork();
        if (pid_ == 0) {
            dup2(fds[1], STDOUT_FILENO);
            close(fds[0]);
            std::vector<char*> argv{const_cast<char*>(SPECTRA_CLI)};
            for (const auto& a : args)
                argv.push_back(const_cast<char*>(a.c_str()));
            argv.push_back(nullptr);
            execv(SPECTRA_CLI, argv.data());
            _exit(127);
        }
        close(fds[1]);
        out_ = fdopen(fds[0], "r");
    }
    ~Server() {
        kill(pid_, SIGTERM);
        waitpid(pid_, nullptr, 0);
        fclose(out_);
    }
    std::string line() {
        std::array<char, 512> buf{};
        if (!fgets(buf.data(), buf.size(), out_))
            return "";
        return buf.data();
    }

private:
    pid_t pid_;
    FILE* out_;
};

int port_of(const std::string& line) {
    auto colon = line.rfind(':');
    return std::stoi(line.substr(colon + 1));
}

} // namespace

TEST(Cli, SynthWritesController) {
    auto spec = write("real.spectra", mirror);
    auto out = ::testing::TempDir() + "/c.spcc";
    std::remove(out.c_str());
    auto r = cli("synth " + spec + " -o " + out);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find("Realizable"), std::string::npos);
    std::ifstream f(out, std::ios::binary);
    char magic[4] = {};
    f.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "SPCC");
}

TEST(Cli, SynthUnrealizableHintsAtCore) {
    auto r = cli("synth " + write("unreal.spectra", unreal));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("Unrealizable"), std::string::npos);
    EXPECT_NE(r.out.find("spectra core"), std::string::npos);
}

TEST(Cli, CorePrintsGuaranteeNames) {
    auto spec = write("unreal.spectra", unreal);
    auto r = cli("core " + spec);
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_NE(r.out.find(spec + ":4:1: note: core guarantee 'a'"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find(spec + ":5:1: note: core guarantee 'b'"), std::string::npos) << r.out;
    EXPECT_EQ(r.out.find("'c'"), std::string::npos);
    auto real = cli("core " + write("real.spectra", mirror));
    EXPECT_EQ(real.code, 1);
    EXPECT_NE(real.out.find("specification is realizable"), std::string::npos);
}

TEST(Cli, CheckAndDiagnostics) {
    EXPECT_EQ(cli("check " + write("real.spectra", mirror)).code, 0);
    auto bad = write("bad.spectra", "spec B\nsys boolean y;\ngar alw z;\n");
    auto r = cli("check " + bad);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find(bad + ":3:"), std::string::npos) << r.out;
    EXPECT_EQ(cli("synth " + bad).code, 1);
}

TEST(Cli, LintReportsFindings) {
    auto spec = write("lint.spectra", "spec L env boolean x; sys boolean y;\ngar t: alw x | !x;\n"
                                      "monitor boolean m { trans next(m) <-> x; }\ngar alw y <-> x;\n");
    auto r = cli("lint " + spec);
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find(spec + ":2:1: warning: 't' is trivially true"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find(spec + ":3:1: warning: monitor 'm' is not deterministic"), std::string::npos) << r.out;
    EXPECT_EQ(cli("lint " + write("real.spectra", mirror)).code, 0);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(cli("").code, 2);
    EXPECT_EQ(cli("frobnicate").code, 2);
    EXPECT_EQ(cli("synth").code, 2);
    EXPECT_EQ(cli("check /no/such/file.spectra").code, 2);
    EXPECT_EQ(cli("synth " + write("real.spectra", mirror) + " --max-states zero").code, 2);
    EXPECT_EQ(cli("--help").code, 0);
}

TEST(Cli, ConcreteAndKernelOutput) {
    auto spec = write("real.spectra", mirror);
    auto r = cli("synth " + spec + " --concrete --emit-kernel");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("gar trans next(y) <-> next(x);"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("Concrete controller: 2 states, 2 initial"), std::string::npos) << r.out;
    auto big = write("big.spectra", "spec B env Int(0..15) a; sys Int(0..15) b; gar alw b = a;\n");
    auto capped = cli("synth " + big + " --concrete --max-states 5");
    EXPECT_EQ(capped.code, 1);
    EXPECT_NE(capped.out.find("symbolic"), std::string::npos) << capped.out;
}

TEST(Cli, NodeCapFromEnvironment) {
    auto spec = write("mult.spectra", "spec Big sys Int(0..200) a; sys Int(0..200) b; env Int(0..200) c;\n"
                                      "gar alw a * b = c;\n");
    auto capped = cli("synth " + spec, "SPECTRA_BDD_NODES=4000");
    EXPECT_EQ(capped.code, 1);
    EXPECT_NE(capped.out.find("4000"), std::string::npos) << capped.out;
    EXPECT_NE(capped.out.find("SPECTRA_BDD_NODES"), std::string::npos) << capped.out;
}

TEST(Cli, WalkServesSession) {
    auto spec = write("walk.spectra", mirror);
    Server s({"walk", spec, "--port", "0"});
    auto first = s.line();
    ASSERT_NE(first.find("serving on http://127.0.0.1:"), std::string::npos) << first;
    auto session = s.line();
    auto at = session.find("/sessions/");
    ASSERT_NE(at, std::string::npos) << session;
    auto id = session.substr(at + 10, 32);
    httplib::Client client("127.0.0.1", port_of(first));
    auto r = client.Post("/sessions/" + id + "/step", R"({"inputs": {"x": true}})", "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 200);
    EXPECT_EQ(nlohmann::json::parse(r->body).at("outputs").at("y"), true);
}

TEST(Cli, ServeAcceptsSpecPath) {
    auto spec = write("serve.spectra", mirror);
    Server s({"serve", "--port", "0", "--host", "127.0.0.1"});
    auto first = s.line();
    ASSERT_NE(first.find("serving on"), std::string::npos) << first;
    httplib::Client client("127.0.0.1", port_of(first.substr(0, first.find("/sessions"))));
    auto r = client.Post("/sessions", nlohmann::json{{"specPath", spec}}.dump(), "application/json");
    ASSERT_TRUE(r);
    EXPECT_EQ(r->status, 201);
}
