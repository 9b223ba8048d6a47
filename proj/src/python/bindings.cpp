#include <cstring>

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ibea/attack.hpp"
#include "ibea/cipher.hpp"
#include "ibea/errors.hpp"
#include "ibea/keyed_oracle.hpp"
#include "ibea/metrics.hpp"
#include "ibea/oracle.hpp"

namespace py = pybind11;
using namespace ibea;

namespace {

Image image_from_array(const py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected a 2-D uint8 array");
    std::vector<std::uint8_t> px(arr.data(), arr.data() + arr.size());
    return Image(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)), std::move(px));
}

py::array_t<std::uint8_t> image_to_array(const Image& img) {
    py::array_t<std::uint8_t> arr({img.height(), img.width()});
    std::memcpy(arr.mutable_data(), img.pixels().data(), img.size());
    return arr;
}

WideImage wide_from_array(const py::array_t<long long, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2)
        throw py::value_error("expected a 2-D integer array");
    std::vector<long long> px(arr.data(), arr.data() + arr.size());
    return WideImage(static_cast<int>(arr.shape(0)), static_cast<int>(arr.shape(1)),
                     std::move(px));
}

py::array_t<long long> wide_to_array(const WideImage& img) {
    py::array_t<long long> arr({img.height(), img.width()});
    std::memcpy(arr.mutable_data(), img.pixels().data(), img.size() * sizeof(long long));
    return arr;
}

} // namespace

PYBIND11_MODULE(_ibea, m) {
    m.doc() = "chaotic image block cipher workbench: cipher, 5-query attack, metrics";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<AttackError>(m, "AttackError", PyExc_RuntimeError);
    py::register_exception<UndefinedCorrelationError>(m, "UndefinedCorrelationError",
                                                      PyExc_ArithmeticError);

    py::class_<Image>(m, "Image")
        .def(py::init(&image_from_array), py::arg("pixels"))
        .def_property_readonly("height", &Image::height)
        .def_property_readonly("width", &Image::width)
        .def("to_numpy", &image_to_array)
        .def("pixel_sum", [](const Image& img) { return pixel_sum(img); })
        .def("__eq__", [](const Image& a, const Image& b) { return a == b; })
        .def("__repr__", [](const Image& img) {
            return "<Image " + std::to_string(img.height()) + "x" + std::to_string(img.width()) +
                   ">";
        });

    py::class_<WideImage>(m, "WideImage")
        .def(py::init(&wide_from_array), py::arg("pixels"))
        .def_static("from_image", &WideImage::from_image)
        .def_property_readonly("height", &WideImage::height)
        .def_property_readonly("width", &WideImage::width)
        .def("to_numpy", &wide_to_array)
        .def("to_image", &WideImage::to_image)
        .def("pixel_sum", [](const WideImage& img) { return pixel_sum(img); })
        .def("__eq__", [](const WideImage& a, const WideImage& b) { return a == b; });

    m.def("read_pgm", &read_pgm_file, py::arg("path"));
    m.def("write_pgm", &write_pgm_file, py::arg("image"), py::arg("path"));
    m.def("read_wide_text", &read_wide_text_file, py::arg("path"));
    m.def("write_wide_text", &write_wide_text_file, py::arg("image"), py::arg("path"));

    py::class_<cipher::KeyMaterial>(m, "KeyMaterial")
        .def(py::init<>())
        .def_readwrite("a", &cipher::KeyMaterial::a)
        .def_readwrite("b", &cipher::KeyMaterial::b)
        .def_readwrite("x0", &cipher::KeyMaterial::x0)
        .def_readwrite("y0", &cipher::KeyMaterial::y0)
        .def_readwrite("z0", &cipher::KeyMaterial::z0)
        .def_readwrite("mu", &cipher::KeyMaterial::mu)
        .def_readwrite("r", &cipher::KeyMaterial::r)
        .def_readwrite("n", &cipher::KeyMaterial::n)
        .def_property(
            "s0", [](const cipher::KeyMaterial& k) { return k.s0; },
            [](cipher::KeyMaterial& k, const std::array<double, 3>& v) { k.s0 = v; })
        .def("validate", &cipher::KeyMaterial::validate)
        .def_static("from_json", &cipher::KeyMaterial::from_json, py::arg("text"))
        .def_static("load", &cipher::KeyMaterial::load, py::arg("path"))
        .def("to_json", &cipher::KeyMaterial::to_json);

    m.def(
        "encrypt",
        [](const Image& img, const cipher::KeyMaterial& key) {
            const auto result = cipher::encrypt(img, key);
            return py::make_tuple(result.cipher, result.eta);
        },
        py::arg("image"), py::arg("key"), "returns (cipher, eta)");
    m.def(
        "encrypt",
        [](const WideImage& img, const cipher::KeyMaterial& key) {
            const auto result = cipher::encrypt(img, key);
            return py::make_tuple(result.cipher, result.eta);
        },
        py::arg("image"), py::arg("key"));
    m.def("encrypt_stepwise",
          py::overload_cast<const Image&, const cipher::KeyMaterial&>(&cipher::encrypt_stepwise),
          py::arg("image"), py::arg("key"));
    m.def("decrypt", &cipher::decrypt, py::arg("cipher"), py::arg("key"), py::arg("eta"));
    m.def("build_mask",
          py::overload_cast<const cipher::KeyMaterial&, long long, int, int>(&cipher::build_mask),
          py::arg("key"), py::arg("eta"), py::arg("m"), py::arg("n"));

    py::class_<EncryptionOracle>(m, "EncryptionOracle")
        .def("encrypt_chosen", &EncryptionOracle::encrypt_chosen, py::arg("chosen"));
    py::class_<cipher::KeyedOracle, EncryptionOracle>(m, "KeyedOracle")
        .def(py::init<cipher::KeyMaterial>(), py::arg("key"));
    py::class_<CountingOracle, EncryptionOracle>(m, "CountingOracle")
        .def(py::init<EncryptionOracle&>(), py::arg("inner"), py::keep_alive<1, 2>())
        .def_property_readonly("query_count", &CountingOracle::query_count);
    py::class_<attack::SubprocessOracle, EncryptionOracle>(m, "SubprocessOracle")
        .def(py::init<std::string>(), py::arg("command"));

    py::class_<attack::Position>(m, "Position")
        .def_readonly("i", &attack::Position::i)
        .def_readonly("j", &attack::Position::j)
        .def("__repr__", [](const attack::Position& p) {
            return "(" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
        });

    py::class_<attack::RecoveredKey>(m, "RecoveredKey")
        .def_readonly("mask", &attack::RecoveredKey::mask)
        .def_readonly("l0", &attack::RecoveredKey::l0)
        .def_readonly("first_pixel", &attack::RecoveredKey::first_pixel)
        .def_readonly("eta", &attack::RecoveredKey::eta)
        .def("decrypt", &attack::RecoveredKey::decrypt, py::arg("cipher"));

    m.def("recover_equivalent_key", &attack::recover_equivalent_key, py::arg("oracle"),
          py::arg("eta"), py::arg("m"), py::arg("n"));
    m.def("attack_decrypt", &attack::attack_decrypt, py::arg("oracle"), py::arg("target"),
          py::arg("eta"), py::arg("m"), py::arg("n"));

    py::class_<metrics::Rational>(m, "Rational")
        .def_readonly("num", &metrics::Rational::num)
        .def_readonly("den", &metrics::Rational::den)
        .def("__eq__", [](const metrics::Rational& a,
                          const metrics::Rational& b) { return a == b; })
        .def("__float__", &metrics::Rational::value)
        .def("__repr__", &metrics::Rational::str);

    py::enum_<metrics::Direction>(m, "Direction")
        .value("horizontal", metrics::Direction::horizontal)
        .value("vertical", metrics::Direction::vertical)
        .value("diagonal", metrics::Direction::diagonal);

    m.def("histogram", [](const Image& img) {
        const auto bins = metrics::histogram(img);
        return std::vector<std::uint64_t>(bins.begin(), bins.end());
    });
    m.def("bitplane_histogram", &metrics::bitplane_histogram, py::arg("image"), py::arg("plane"));
    m.def(
        "histogram_variance",
        [](const std::vector<std::uint64_t>& bins) { return metrics::histogram_variance(bins); },
        py::arg("bins"));
    m.def(
        "histogram_variance_exact",
        [](const std::vector<std::uint64_t>& bins) {
            return metrics::histogram_variance_exact(bins);
        },
        py::arg("bins"));
    m.def("shannon_entropy", &metrics::shannon_entropy, py::arg("image"));
    m.def("adjacent_correlation", &metrics::adjacent_correlation, py::arg("image"),
          py::arg("direction"));
    m.def("npcr", &metrics::npcr, py::arg("c1"), py::arg("c2"));
    m.def("uaci", &metrics::uaci, py::arg("c1"), py::arg("c2"));
    m.def("keystream_utilization", &metrics::keystream_utilization, py::arg("m"), py::arg("d"));
    m.def(
        "metric_report",
        [](const Image& img, const std::string& source) {
            return metrics::analyze(img, source).to_json();
        },
        py::arg("image"), py::arg("source") = std::string(), "single-image report as JSON text");
}
