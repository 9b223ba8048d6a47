// ibea: chaotic image block cipher workbench.
//
// Subcommands: encrypt, decrypt, attack, metrics, demo, oracle.
// Exit codes: 0 success, 1 usage error, 2 validation error, 3 attack failure.

#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ibea/attack.hpp"
#include "ibea/cipher.hpp"
#include "ibea/errors.hpp"
#include "ibea/keyed_oracle.hpp"
#include "ibea/metrics.hpp"
#include "ibea/oracle.hpp"

using json = nlohmann::json;
using namespace ibea;

namespace {

std::string sidecar_path(const std::string& image_path) {
    return image_path + ".json";
}

void write_sidecar(const std::string& image_path, long long eta, int m, int n) {
    json j;
    j["eta"] = eta;
    j["M"] = m;
    j["N"] = n;
    std::ofstream out(sidecar_path(image_path));
    if (!out)
        throw FormatError("cannot write sidecar " + sidecar_path(image_path));
    out << j.dump(2) << "\n";
}

std::optional<long long> read_sidecar_eta(const std::string& image_path) {
    std::ifstream in(sidecar_path(image_path));
    if (!in)
        return std::nullopt;
    try {
        json j;
        in >> j;
        return j.at("eta").get<long long>();
    } catch (const json::exception&) {
        throw FormatError("sidecar " + sidecar_path(image_path) + " is not a valid metadata file");
    }
}

long long require_eta(const std::optional<long long>& flag, const std::string& image_path,
                      const char* cmd) {
    if (flag)
        return *flag;
    if (auto eta = read_sidecar_eta(image_path))
        return *eta;
    throw ValidationError(
        std::string(cmd) +
        ": no eta available. Pass --eta or keep the \"<cipher>.json\" sidecar written by "
        "`encrypt`. The keystream is coupled to the plaintext pixel sum (its mean), so the "
        "receiver cannot decrypt without that value travelling alongside the ciphertext.");
}

void print_wide(std::ostream& out, const WideImage& img) {
    for (int i = 0; i < img.height(); ++i) {
        out << "   ";
        for (int j = 0; j < img.width(); ++j)
            out << std::setw(6) << img.at(i, j);
        out << "\n";
    }
}

void print_image(std::ostream& out, const Image& img) {
    print_wide(out, WideImage::from_image(img));
}

std::vector<std::pair<int, int>> diff_positions(const Image& a, const Image& b) {
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < a.height(); ++i)
        for (int j = 0; j < a.width(); ++j)
            if (a.at(i, j) != b.at(i, j))
                out.emplace_back(i, j);
    return out;
}

std::string format_positions(const std::vector<std::pair<int, int>>& positions) {
    std::ostringstream ss;
    for (std::size_t k = 0; k < positions.size(); ++k)
        ss << (k ? ", " : "") << "(" << positions[k].first << "," << positions[k].second << ")";
    return ss.str();
}

// --- subcommand bodies ----------------------------------------------------

void cmd_encrypt(const std::string& key_path, const std::string& in_path,
                 const std::string& out_path) {
    const auto key = cipher::KeyMaterial::load(key_path);
    const Image plain = read_pgm_file(in_path);
    const auto result = cipher::encrypt(plain, key);
    write_pgm_file(result.cipher, out_path);
    write_sidecar(out_path, result.eta, result.cipher.height(), result.cipher.width());
    std::cout << "encrypted " << in_path << " -> " << out_path << " (eta " << result.eta
              << ", sidecar " << sidecar_path(out_path) << ")\n";
}

void cmd_decrypt(const std::string& key_path, const std::string& in_path,
                 const std::string& out_path, const std::optional<long long>& eta_flag) {
    const auto key = cipher::KeyMaterial::load(key_path);
    const Image cipher_img = read_pgm_file(in_path);
    const long long eta = require_eta(eta_flag, in_path, "decrypt");
    write_pgm_file(cipher::decrypt(cipher_img, key, eta), out_path);
    std::cout << "decrypted " << in_path << " -> " << out_path << " (eta " << eta << ")\n";
}

void cmd_metrics(const std::string& in_path, const std::optional<std::string>& pair_path,
                 const std::optional<std::string>& out_path) {
    const Image img = read_pgm_file(in_path);
    metrics::MetricReport report = metrics::analyze(img, in_path);
    if (pair_path)
        metrics::analyze_pair(report, img, read_pgm_file(*pair_path), *pair_path);
    const std::string text = report.to_json();
    std::cout << text << "\n";
    if (out_path) {
        std::ofstream out(*out_path);
        if (!out)
            throw FormatError("cannot write report " + *out_path);
        out << text << "\n";
    }
}

void cmd_attack(const std::optional<std::string>& oracle_key,
                const std::optional<std::string>& oracle_cmd, const std::string& target_path,
                const std::string& out_path, const std::optional<long long>& eta_flag,
                const std::optional<std::string>& emit_mask,
                const std::optional<std::string>& emit_perm,
                const std::optional<std::string>& emit_meta) {
    const Image target = read_pgm_file(target_path);
    const long long eta = require_eta(eta_flag, target_path, "attack");

    std::unique_ptr<EncryptionOracle> inner;
    if (oracle_key)
        inner = std::make_unique<cipher::KeyedOracle>(cipher::KeyMaterial::load(*oracle_key));
    else
        inner = std::make_unique<attack::SubprocessOracle>(*oracle_cmd);
    CountingOracle oracle(*inner);

    const attack::RecoveredKey rec =
        attack::recover_equivalent_key(oracle, eta, target.height(), target.width());
    const Image recovered = rec.decrypt(target);
    write_pgm_file(recovered, out_path);

    std::cout << "located first-pixel position: (" << rec.first_pixel.i << ","
              << rec.first_pixel.j << ")\n";
    std::cout << "oracle queries: " << oracle.query_count() << "\n";
    std::cout << "recovered plaintext written to " << out_path << "\n";

    if (emit_mask)
        write_pgm_file(rec.mask, *emit_mask);
    if (emit_perm) {
        std::ofstream out(*emit_perm);
        if (!out)
            throw FormatError("cannot write " + *emit_perm);
        for (auto v : rec.l0)
            out << v << "\n";
    }
    if (emit_meta) {
        json j;
        j["u"] = rec.first_pixel.i;
        j["v"] = rec.first_pixel.j;
        j["eta"] = rec.eta;
        j["M"] = target.height();
        j["N"] = target.width();
        std::ofstream out(*emit_meta);
        if (!out)
            throw FormatError("cannot write " + *emit_meta);
        out << j.dump(2) << "\n";
    }
}

void cmd_oracle(const std::string& key_path) {
    const auto key = cipher::KeyMaterial::load(key_path);
    const WideImage chosen = read_wide_text(std::cin);
    const auto result = cipher::encrypt(chosen, key);
    write_pgm(result.cipher, std::cout);
    std::cout.flush();
}

// --- demo -------------------------------------------------------------------

// 5x5 toy plaintext with pixel sum 575.
Image demo_toy_image() {
    return Image(5, 5,
                 {23, 17, 5,  12, 30,  //
                  9,  41, 2,  28, 7,   //
                  50, 3,  19, 11, 26,  //
                  8,  34, 15, 47, 6,   //
                  21, 13, 38, 10, 100});
}

cipher::KeyMaterial demo_toy_key() {
    cipher::KeyMaterial key;
    key.a = 2;
    key.b = 3;
    key.x0 = 0.123;
    key.y0 = 0.456;
    key.z0 = 0.147;
    key.mu = 0.3;
    key.r = 3.999;
    key.s0 = {0.789, 0.25, 0.75};
    key.n = 10000;
    return key;
}

cipher::KeyMaterial demo_key_256() {
    cipher::KeyMaterial key = demo_toy_key();
    key.a = 97;
    key.b = 111;
    return key;
}

// Deterministic synthetic photograph stand-in: smooth base plus mild noise.
Image demo_synthetic_256() {
    std::mt19937_64 rng(42);
    std::uniform_int_distribution<int> noise(0, 31);
    std::vector<std::uint8_t> px(256 * 256);
    for (int i = 0; i < 256; ++i)
        for (int j = 0; j < 256; ++j) {
            const int base = (i / 2 + j / 3 + ((i * j) >> 6)) % 200;
            px[static_cast<std::size_t>(i) * 256 + j] =
                static_cast<std::uint8_t>((base + noise(rng)) & 255);
        }
    return Image(256, 256, std::move(px));
}

bool demo_attack_narrative(std::ostream& out, const Image& plain, const cipher::KeyMaterial& key,
                           bool verbose) {
    const int m = plain.height(), n = plain.width();
    const auto enc = cipher::encrypt(plain, key);
    out << "plaintext pixel sum eta = " << enc.eta << "\n";
    if (verbose) {
        out << "plain-image:\n";
        print_image(out, plain);
        out << "cipher-image:\n";
        print_image(out, enc.cipher);
    }

    cipher::KeyedOracle inner(key);
    CountingOracle oracle(inner);

    const attack::ProbeSet probes = attack::make_probe_images(enc.eta, m, n);
    if (verbose) {
        out << "probe q1 (zeros, first pixel eta):\n";
        print_wide(out, probes.q1);
        out << "probe q2 (first pixel eta-1, second pixel 1):\n";
        print_wide(out, probes.q2);
        out << "probe q3 (first pixel eta-1, third pixel 1):\n";
        print_wide(out, probes.q3);
    }

    const Image q1 = oracle.encrypt_chosen(probes.q1);
    const Image q2 = oracle.encrypt_chosen(probes.q2);
    const Image q3 = oracle.encrypt_chosen(probes.q3);
    out << "difference set Q1/Q2: {" << format_positions(diff_positions(q1, q2)) << "}\n";
    out << "difference set Q1/Q3: {" << format_positions(diff_positions(q1, q3)) << "}\n";

    const attack::Position uv = attack::locate_first_pixel(q1, q2, q3);
    out << "located first-pixel position (u,v) = (" << uv.i << "," << uv.j << ")\n";

    const Image mask = attack::recover_mask(q1, enc.eta, uv);
    if (verbose) {
        out << "recovered mask image:\n";
        print_image(out, mask);
    }

    const attack::IndexImages idx = attack::make_index_images(enc.eta, m, n);
    if (verbose) {
        out << "index image O0 (low digits, first pixel balanced):\n";
        print_wide(out, idx.o0);
        out << "index image O1 (high digits, first pixel balanced):\n";
        print_wide(out, idx.o1);
    }

    const Image c0 = oracle.encrypt_chosen(idx.o0);
    const Image c1 = oracle.encrypt_chosen(idx.o1);
    const auto l0 = attack::recover_permutation(c0, c1, mask, uv, m, n);
    if (verbose) {
        out << "permutation vector L0 (permuted position -> plain index):\n   ";
        for (std::size_t k = 0; k < l0.size(); ++k)
            out << l0[k] << (k + 1 < l0.size() ? " " : "\n");
    }

    const attack::RecoveredKey rec{mask, l0, uv, enc.eta};
    const Image recovered = rec.decrypt(enc.cipher);
    if (verbose) {
        out << "recovered plain-image:\n";
        print_image(out, recovered);
    }

    const bool exact = recovered == plain;
    out << "oracle queries: " << oracle.query_count() << "\n";
    out << "exact recovery: " << (exact ? "yes" : "NO") << "\n";
    return exact && oracle.query_count() == 5;
}

void cmd_demo() {
    std::cout << "=== 5x5 walkthrough ===\n";
    const bool toy_ok = demo_attack_narrative(std::cout, demo_toy_image(), demo_toy_key(), true);

    std::cout << "\n=== 256x256 synthetic image, textbook key ===\n";
    const auto t0 = std::chrono::steady_clock::now();
    const bool big_ok =
        demo_attack_narrative(std::cout, demo_synthetic_256(), demo_key_256(), false);
    const auto elapsed =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0);
    std::cout << "elapsed: " << elapsed.count() << " ms\n";

    if (!toy_ok || !big_ok)
        throw AttackError("demo: recovery was not exact");
    std::cout << "\ndemo: both recoveries exact, 5 queries each\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"chaotic image block cipher workbench: implement, break, measure"};
    app.require_subcommand(1);

    // encrypt
    auto* enc = app.add_subcommand("encrypt", "encrypt a square PGM under a key file");
    std::string enc_key, enc_in, enc_out;
    enc->add_option("--key", enc_key, "key JSON file")->required();
    enc->add_option("input", enc_in, "plain PGM")->required();
    enc->add_option("output", enc_out, "cipher PGM (sidecar <output>.json is written too)")
        ->required();

    // decrypt
    auto* dec = app.add_subcommand("decrypt", "decrypt a cipher PGM (needs eta)");
    std::string dec_key, dec_in, dec_out;
    std::optional<long long> dec_eta;
    dec->add_option("--key", dec_key, "key JSON file")->required();
    dec->add_option("--eta", dec_eta, "plaintext pixel sum (falls back to <input>.json sidecar)");
    dec->add_option("input", dec_in, "cipher PGM")->required();
    dec->add_option("output", dec_out, "recovered PGM")->required();

    // attack
    auto* atk = app.add_subcommand("attack",
                                   "recover an equivalent key with 5 chosen plaintexts and "
                                   "decrypt the target without the secret key");
    std::optional<std::string> atk_key, atk_cmd;
    std::string atk_target, atk_out;
    std::optional<long long> atk_eta;
    std::optional<std::string> atk_mask, atk_perm, atk_meta;
    auto* oracle_group = atk->add_option_group("oracle", "where chosen plaintexts get encrypted");
    oracle_group->add_option("--oracle-key", atk_key, "key JSON file for an in-process oracle");
    oracle_group->add_option("--oracle-cmd", atk_cmd,
                             "shell command speaking the oracle protocol (wide text on stdin, "
                             "PGM on stdout, one query per run)");
    oracle_group->require_option(1);
    atk->add_option("--eta", atk_eta, "plaintext pixel sum of the target (or <target>.json)");
    atk->add_option("--emit-mask", atk_mask, "write the recovered mask image (PGM)");
    atk->add_option("--emit-perm", atk_perm, "write L0, one index per line");
    atk->add_option("--emit-meta", atk_meta, "write (u,v), eta, M, N as JSON");
    atk->add_option("target", atk_target, "cipher PGM to break")->required();
    atk->add_option("output", atk_out, "recovered PGM")->required();

    // metrics
    auto* met = app.add_subcommand("metrics", "security statistics of an image (pair optional)");
    std::string met_in;
    std::optional<std::string> met_pair, met_out;
    met->add_option("input", met_in, "PGM to analyze")->required();
    met->add_option("--pair", met_pair, "second PGM for NPCR/UACI");
    met->add_option("--out", met_out, "also write the JSON report here");

    // demo
    app.add_subcommand("demo", "worked attack on a 5x5 toy image and a 256x256 image");

    // oracle
    auto* orc = app.add_subcommand("oracle",
                                   "serve one encryption query: wide-image text on stdin, "
                                   "cipher PGM on stdout");
    std::string orc_key;
    orc->add_option("--key", orc_key, "key JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand("encrypt"))
            cmd_encrypt(enc_key, enc_in, enc_out);
        else if (app.got_subcommand("decrypt"))
            cmd_decrypt(dec_key, dec_in, dec_out, dec_eta);
        else if (app.got_subcommand("attack"))
            cmd_attack(atk_key, atk_cmd, atk_target, atk_out, atk_eta, atk_mask, atk_perm,
                       atk_meta);
        else if (app.got_subcommand("metrics"))
            cmd_metrics(met_in, met_pair, met_out);
        else if (app.got_subcommand("demo"))
            cmd_demo();
        else if (app.got_subcommand("oracle"))
            cmd_oracle(orc_key);
    } catch (const AttackError& e) {
        std::cerr << "attack failure: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
