#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include <gtest/gtest.h>

#include "mtjrng/bit_io.hpp"
#include "mtjrng/config.hpp"
#include "mtjrng/digest.hpp"
#include "mtjrng/error.hpp"
#include "mtjrng/pipeline.hpp"

namespace fs = std::filesystem;
namespace io = mtjrng::io;
namespace cli = mtjrng::cli;
using mtjrng::BitString;
using mtjrng::PipelineConfig;

namespace {

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("mtjrng_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  fs::path operator/(const std::string& name) const { return path_ / name; }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

BitString random_bits(std::size_t n, std::mt19937_64& rng) {
  BitString b(n);
  for (std::size_t i = 0; i < n; ++i) b.set(i, rng() & 1);
  return b;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.shuffles = 100;
  c.rng_seed = 5;
  c.permutation_seed = 6;
  return c;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(MTJRNG_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(BitFile, RoundTripRandomLengths) {
  TempDir dir;
  std::mt19937_64 rng(1);
  for (int t = 0; t < 60; ++t) {
    const std::size_t n = rng() % 5000;
    const auto b = random_bits(n, rng);
    for (auto fmt : {io::Format::packed, io::Format::ascii}) {
      const auto path = dir / ("f" + std::to_string(t));
      io::write_bit_file(path, b, fmt);
      EXPECT_EQ(io::read_bit_file(path), b) << n;
      EXPECT_EQ(io::load_bits(path), b);
      EXPECT_EQ(fs::file_size(path), fmt == io::Format::packed ? (n + 7) / 8 : n);
    }
  }
}

TEST(BitFile, PackingIsLsbFirst) {
  TempDir dir;
  io::write_bit_file(dir / "x", BitString::from_string("1000000001"), io::Format::packed);
  const auto bytes = slurp(dir / "x");
  ASSERT_EQ(bytes.size(), 2u);
  EXPECT_EQ(static_cast<unsigned char>(bytes[0]), 0x01);
  EXPECT_EQ(static_cast<unsigned char>(bytes[1]), 0x02);
  const auto meta = io::read_key_values(io::sidecar_path(dir / "x"));
  EXPECT_EQ(meta.at("bits"), "10");
  EXPECT_EQ(meta.at("format"), "packed");
  EXPECT_EQ(meta.at("bit_order"), "lsb_first");
}

TEST(BitFile, TruncationDetected) {
  TempDir dir;
  std::mt19937_64 rng(2);
  io::write_bit_file(dir / "x", random_bits(1000, rng), io::Format::packed);
  fs::resize_file(dir / "x", 100);
  EXPECT_THROW(io::read_bit_file(dir / "x"), mtjrng::StageError);
  EXPECT_THROW(io::read_bit_file(dir / "missing"), mtjrng::StageError);
}

TEST(ExtractionFile, RoundTrip) {
  TempDir dir;
  std::mt19937_64 rng(3);
  for (std::size_t n : {0u, 1u, 7u, 8u, 9u, 1001u}) {
    const auto b = random_bits(n, rng);
    io::ExtractionHeader h;
    h.fields = {{"n", "12"}, {"k", "10"}, {"m", std::to_string(n)}, {"epsilon", "1e-10"}};
    io::write_extraction_file(dir / "e", h, b);
    io::ExtractionHeader back;
    EXPECT_EQ(io::read_extraction_file(dir / "e", &back), b);
    EXPECT_EQ(back.fields.at("epsilon"), "1e-10");
    EXPECT_EQ(back.fields.at("bits"), std::to_string(n));
    EXPECT_EQ(io::load_bits(dir / "e"), b);
  }
  fs::resize_file(dir / "e", fs::file_size(dir / "e") - 1);
  EXPECT_THROW(io::read_extraction_file(dir / "e"), mtjrng::StageError);
}

TEST(KeyValues, Parsing) {
  const auto kv = io::parse_key_values("# comment\n a = 1 \n\nb=two words # trailing\n");
  EXPECT_EQ(kv.at("a"), "1");
  EXPECT_EQ(kv.at("b"), "two words");
  EXPECT_THROW(io::parse_key_values("a = 1\na = 2\n"), mtjrng::ConfigError);
  EXPECT_THROW(io::parse_key_values("novalue\n"), mtjrng::ConfigError);
}

TEST(Config, KeysAndValidation) {
  auto c = PipelineConfig::from_key_values({{"v_perturb", "700"}, {"markov_flip", "0.2"}, {"epsilon", "0.001"}});
  EXPECT_EQ(c.cycle.v_perturb, 700);
  EXPECT_EQ(c.noise.markov_flip, 0.2);
  EXPECT_EQ(c.epsilon.text(), "0.001");
  EXPECT_THROW(PipelineConfig::from_key_values({{"nonsense", "1"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"epsilon", "1"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"epsilon", "0"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"bits", "-5"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"bits", "12x"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"markov_flip", "1"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"format", "hex"}}), mtjrng::ConfigError);
  EXPECT_THROW(PipelineConfig::from_key_values({{"shuffles", "50"}}), mtjrng::ConfigError);
}

TEST(Config, ResolveEchoesSeedsAndRoundTrips) {
  PipelineConfig c;
  EXPECT_FALSE(c.rng_seed.has_value());
  c.resolve_seeds();
  ASSERT_TRUE(c.rng_seed.has_value());
  ASSERT_TRUE(c.permutation_seed.has_value());
  const auto text = c.render();
  EXPECT_NE(text.find("rng_seed = " + std::to_string(*c.rng_seed)), std::string::npos);
  const auto back = PipelineConfig::from_key_values(io::parse_key_values(text));
  EXPECT_EQ(back.render(), text);
  EXPECT_EQ(back.digest(), c.digest());
}

TEST(Config, ShippedDeskConfigLoads) {
  const auto c = PipelineConfig::load(fs::path(MTJRNG_SOURCE_DIR) / "configs" / "desk.conf");
  EXPECT_EQ(c.bits, 10'000'000u);
  EXPECT_EQ(c.noise.markov_flip, 0.2);
  EXPECT_EQ(c.switching_target, 0.55);
}

TEST(Simulate, PackedSizeAndDeterminism) {
  TempDir dir;
  auto c = small_config();
  c.bits = 1'000'000;
  std::ostringstream log;
  const auto r = cli::cmd_simulate(c, dir / "a.bin", log);
  EXPECT_EQ(r.bits, 1'000'000u);
  EXPECT_EQ(fs::file_size(dir / "a.bin"), 125'000u);
  const auto meta = io::read_key_values(io::sidecar_path(dir / "a.bin"));
  EXPECT_EQ(meta.at("bits"), "1000000");
  EXPECT_EQ(meta.at("config_digest"), c.digest());
  cli::cmd_simulate(c, dir / "b.bin", log);
  EXPECT_EQ(slurp(dir / "a.bin"), slurp(dir / "b.bin"));
  EXPECT_EQ(slurp(io::sidecar_path(dir / "a.bin")), slurp(io::sidecar_path(dir / "b.bin")));
}

TEST(Simulate, BiasedSourceFailsFrequencyDownstream) {
  TempDir dir;
  auto c = small_config();
  c.bits = 10'000'000;
  c.switching_target = 0.55;
  std::ostringstream log;
  cli::cmd_simulate(c, dir / "raw.bin", log);
  const auto suite = cli::cmd_test(c, dir / "raw.bin", dir / "raw.suite", log);
  EXPECT_EQ(suite.n_blocks, 10u);
  EXPECT_FALSE(suite.result(mtjrng::nist::TestId::frequency).pass);
  EXPECT_TRUE(suite.result(mtjrng::nist::TestId::runs).skipped);
  EXPECT_TRUE(fs::exists(dir / "raw.suite"));
  EXPECT_TRUE(fs::exists(dir / "raw.suite.kv"));
}

TEST(Estimate, BalancedSource) {
  TempDir dir;
  auto c = small_config();
  c.bits = 10'000'000;
  std::ostringstream log;
  cli::cmd_simulate(c, dir / "raw.bin", log);
  const auto rep = cli::cmd_estimate(c, dir / "raw.bin", dir / "raw.entropy", log);
  EXPECT_GE(rep.h_min_per_bit, 0.98);
  const auto back = mtjrng::entropy::parse_report(io::read_text(dir / "raw.entropy"));
  EXPECT_EQ(back.k_extractable, rep.k_extractable);
}

TEST(Estimate, AllZerosHalts) {
  TempDir dir;
  io::write_bit_file(dir / "z.bin", BitString::zeros(100'000), io::Format::packed);
  std::ostringstream log;
  try {
    cli::cmd_estimate(small_config(), dir / "z.bin", dir / "z.entropy", log);
    FAIL() << "expected InsufficientEntropy";
  } catch (const mtjrng::InsufficientEntropy& e) {
    EXPECT_NE(std::string(e.what()).find("insufficient entropy"), std::string::npos);
  }
  const auto rep = mtjrng::entropy::parse_report(io::read_text(dir / "z.entropy"));
  EXPECT_EQ(rep.k_extractable, 0u);
  EXPECT_EQ(rep.h_min_per_bit, 0.0);
}

TEST(Estimate, TruncatedFile) {
  TempDir dir;
  io::write_bit_file(dir / "t.bin", BitString::zeros(100'000), io::Format::packed);
  fs::resize_file(dir / "t.bin", 1000);
  std::ostringstream log;
  EXPECT_THROW(cli::cmd_estimate(small_config(), dir / "t.bin", dir / "t.entropy", log),
               mtjrng::StageError);
}

TEST(Extract, DeskScaleLengthAndHeader) {
  TempDir dir;
  std::mt19937_64 rng(4);
  io::write_bit_file(dir / "raw.bin", random_bits(10'000'000, rng), io::Format::packed);
  io::write_text(dir / "raw.entropy", "n_bits: 10000000\nh_min_per_bit: 0.77\nk_extractable: 7700000\n");
  std::ostringstream log;
  const auto s = cli::cmd_extract(small_config(), dir / "raw.bin", dir / "raw.entropy", dir / "x.bin", log);
  EXPECT_EQ(s.params.m, 7'699'935u);
  EXPECT_EQ(s.output_bits, 7'699'935u);
  EXPECT_TRUE(s.seed_from_os);
  EXPECT_NE(log.str().find("throughput"), std::string::npos);
  EXPECT_NE(log.str().find("warning"), std::string::npos);
  io::ExtractionHeader h;
  const auto out = io::read_extraction_file(dir / "x.bin", &h);
  EXPECT_EQ(out.size(), 7'699'935u);
  EXPECT_EQ(h.fields.at("n"), "10000000");
  EXPECT_EQ(h.fields.at("k"), "7700000");
  EXPECT_EQ(h.fields.at("m"), "7699935");
  EXPECT_EQ(h.fields.at("epsilon"), "1e-10");
  EXPECT_EQ(h.fields.at("output_digest"), mtjrng::digest(out));

  // Rerunning with the saved seed reproduces the output exactly.
  auto c = small_config();
  c.seed_file = s.seed_path;
  cli::cmd_extract(c, dir / "raw.bin", dir / "raw.entropy", dir / "y.bin", log);
  EXPECT_EQ(io::load_bits(dir / "y.bin"), out);
}

TEST(Extract, SeedErrorsAndInsufficientEntropy) {
  TempDir dir;
  std::mt19937_64 rng(5);
  io::write_bit_file(dir / "raw.bin", random_bits(1000, rng), io::Format::packed);
  io::write_text(dir / "raw.entropy", "n_bits: 1000\nh_min_per_bit: 0.5\nk_extractable: 500\n");
  io::write_bit_file(dir / "short.seed", random_bits(100, rng), io::Format::packed);
  auto c = small_config();
  c.seed_file = dir / "short.seed";
  std::ostringstream log;
  EXPECT_THROW(cli::cmd_extract(c, dir / "raw.bin", dir / "raw.entropy", dir / "x.bin", log),
               mtjrng::ConfigError);

  io::write_text(dir / "low.entropy", "n_bits: 1000\nh_min_per_bit: 0.05\nk_extractable: 50\n");
  try {
    cli::cmd_extract(small_config(), dir / "raw.bin", dir / "low.entropy", dir / "x.bin", log);
    FAIL() << "expected InsufficientEntropy";
  } catch (const mtjrng::InsufficientEntropy& e) {
    EXPECT_NE(std::string(e.what()).find("raise epsilon"), std::string::npos);
  }
  io::write_text(dir / "mismatch.entropy", "n_bits: 999\nh_min_per_bit: 0.5\nk_extractable: 499\n");
  EXPECT_THROW(cli::cmd_extract(small_config(), dir / "raw.bin", dir / "mismatch.entropy", dir / "x.bin", log),
               mtjrng::StageError);
}

TEST(Extract, RawSeedFileBytes) {
  TempDir dir;
  std::mt19937_64 rng(6);
  io::write_bit_file(dir / "raw.bin", random_bits(1000, rng), io::Format::packed);
  io::write_text(dir / "raw.entropy", "n_bits: 1000\nh_min_per_bit: 0.5\nk_extractable: 500\n");
  // m = 500 - 2*3 + 2 = 496 at eps = 1/8, r = 1495 -> 187 bytes
  std::string bytes(187, '\0');
  for (auto& ch : bytes) ch = static_cast<char>(rng());
  io::write_text(dir / "raw.seed", bytes);
  auto c = small_config();
  c.epsilon = mtjrng::extract::Epsilon::parse("0.125");
  c.seed_file = dir / "raw.seed";
  std::ostringstream log;
  const auto s = cli::cmd_extract(c, dir / "raw.bin", dir / "raw.entropy", dir / "x.bin", log);
  EXPECT_EQ(s.params.m, 496u);
  EXPECT_FALSE(s.seed_from_os);
}

TEST(Extract, ChunkedMode) {
  TempDir dir;
  std::mt19937_64 rng(7);
  io::write_bit_file(dir / "raw.bin", random_bits(10'500, rng), io::Format::packed);
  io::write_text(dir / "raw.entropy", "n_bits: 10500\nh_min_per_bit: 0.5\nk_extractable: 5250\n");
  auto c = small_config();
  c.chunk_bits = 2000;
  c.epsilon = mtjrng::extract::Epsilon::parse("0.0625");
  std::ostringstream log;
  const auto s = cli::cmd_extract(c, dir / "raw.bin", dir / "raw.entropy", dir / "x.bin", log);
  EXPECT_EQ(s.chunks, 5u);
  EXPECT_EQ(s.discarded_bits, 500u);
  EXPECT_EQ(s.params.m, 1000u - 8 + 2);
  EXPECT_EQ(s.output_bits, 5 * s.params.m);
}

TEST(Test, BlockLengthZero) {
  TempDir dir;
  io::write_bit_file(dir / "b.bin", BitString::zeros(1000), io::Format::packed);
  auto c = small_config();
  c.block_length = 0;
  std::ostringstream log;
  EXPECT_THROW(cli::cmd_test(c, dir / "b.bin", dir / "b.suite", log), mtjrng::ConfigError);
}

TEST(Test, TooShort) {
  TempDir dir;
  io::write_bit_file(dir / "b.bin", BitString::zeros(1'500'000), io::Format::packed);
  std::ostringstream log;
  EXPECT_THROW(cli::cmd_test(small_config(), dir / "b.bin", dir / "b.suite", log), mtjrng::StageError);
}

TEST(Pipeline, DryRunTouchesNothing) {
  TempDir dir;
  std::ostringstream log;
  PipelineConfig c;
  cli::cmd_pipeline(c, dir / "out", true, log);
  EXPECT_FALSE(fs::exists(dir / "out"));
  EXPECT_NE(log.str().find("rng_seed = "), std::string::npos);
  EXPECT_NE(log.str().find("permutation_seed = "), std::string::npos);
}

TEST(Pipeline, LowEntropyHaltsAtExtract) {
  TempDir dir;
  auto c = small_config();
  c.bits = 60;  // k <= 60 < 2 log2(1e10) - 2
  std::ostringstream log;
  try {
    cli::cmd_pipeline(c, dir / "out", false, log);
    FAIL() << "expected InsufficientEntropy";
  } catch (const mtjrng::InsufficientEntropy& e) {
    EXPECT_NE(std::string(e.what()).find("epsilon"), std::string::npos);
  }
  EXPECT_TRUE(fs::exists(dir / "out" / "raw.entropy"));
  EXPECT_FALSE(fs::exists(dir / "out" / "extracted.bin"));
}

TEST(Pipeline, SmallEndToEnd) {
  TempDir dir;
  auto c = small_config();
  c.bits = 3'000'000;
  std::ostringstream log;
  const auto s = cli::cmd_pipeline(c, dir / "out", false, log);
  ASSERT_TRUE(s.extract.has_value());
  const auto& p = s.extract->params;
  EXPECT_EQ(p.k, s.estimate->k_extractable);
  EXPECT_EQ(p.n, 3'000'000u);
  EXPECT_EQ(p.m, mtjrng::extract::output_length(p.k, p.epsilon));
  EXPECT_EQ(p.r, p.n + p.m - 1);
  EXPECT_NO_THROW(p.validate());
  EXPECT_TRUE(fs::exists(dir / "out" / "summary.txt"));
  EXPECT_TRUE(fs::exists(dir / "out" / "config.resolved"));
  // Rerunning from the echoed configuration reproduces the raw file.
  const auto echoed = PipelineConfig::load(dir / "out" / "config.resolved");
  cli::cmd_simulate(echoed, dir / "again.bin", log);
  EXPECT_EQ(slurp(dir / "again.bin"), slurp(dir / "out" / "raw.bin"));
}

TEST(Cli, ExitCodes) {
  TempDir dir;
  const auto d = dir.path().string();
  EXPECT_EQ(run_cli("simulate --bits 20000 --rng-seed 3 --out " + d + "/r.bin"), 0);
  EXPECT_EQ(run_cli("simulate --bits 0 --out " + d + "/r0.bin"), 2);
  EXPECT_EQ(run_cli("simulate --epsilon 2 --out " + d + "/r0.bin"), 2);
  EXPECT_EQ(run_cli("simulate --set bogus=1"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("estimate " + d + "/missing.bin"), 1);
  EXPECT_EQ(run_cli("estimate --shuffles 100 --out " + d + "/r.entropy " + d + "/r.bin"), 0);
  EXPECT_EQ(run_cli("test --block-length 0 " + d + "/r.bin"), 2);
  EXPECT_EQ(run_cli("test " + d + "/r.bin"), 1);
  EXPECT_EQ(run_cli("pipeline --dry-run --out " + d + "/p"), 0);
  EXPECT_FALSE(fs::exists(dir / "p"));
  EXPECT_EQ(run_cli("simulate --format ascii --bits 100 --rng-seed 1 --out " + d + "/a.txt"), 0);
  EXPECT_EQ(fs::file_size(dir / "a.txt"), 100u);
}
