/*	netdecoy
 *
 *	Copyright (c) 2026: The netdecoy authors
 *
 *	Licensed under the Apache License, Version 2.0 (the "License");
 *	you may not use this file except in compliance with the License.
 *	You may obtain a copy of the License at
 *
 *		http://www.apache.org/licenses/LICENSE-2.0
 *
 *	Unless required by applicable law or agreed to in writing, software
 *	distributed under the License is distributed on an "AS IS" BASIS,
 *	WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 *	See the License for the specific language governing permissions and
 *	limitations under the License.
 */
#include <catch2/catch_amalgamated.hpp>

#include "netdecoy/dnp3/transport.hpp"
#include "netdecoy/util/rng.hpp"

using namespace netdecoy;
using namespace netdecoy::dnp3;

namespace {

AppFragment random_response(Rng& rng, size_t max_points) {
	AppFragment frag;
	frag.transport_seq = static_cast<uint8_t>(rng.below(64));
	frag.app_seq = static_cast<uint8_t>(rng.below(16));
	frag.function = FunctionCode::Response;
	ObjectBlock blk;
	blk.group = 30;
	blk.variation = 1;
	size_t n = rng.below(max_points + 1);
	std::vector<AnalogPoint> pts(n);
	for (auto& p : pts) {
		p.flag = 0x01;
		p.value = static_cast<int32_t>(rng.below(1u << 31)) - (1 << 30);
	}
	blk.count = static_cast<uint16_t>(n);
	blk.points = std::move(pts);
	frag.objects.push_back(std::move(blk));
	return frag;
}

} // namespace

TEST_CASE("fragment size arithmetic") {
	// 4-octet fragment header, 6-octet block header, 5 octets per analog point
	CHECK(encoded_fragment_size(AppFragment{}) == 4);
	CHECK(encoded_fragment_size(encode_analog_response({}, 0)) == 10);
	CHECK(encoded_fragment_size(encode_analog_response({42}, 0)) == 15);
	CHECK(encoded_fragment_size(encode_analog_response(std::vector<int32_t>(201, 1), 0)) == 1015);

	auto frag = encode_analog_response(std::vector<int32_t>(200, 7), 3);
	CHECK(encoded_fragment_size(frag) == 1010);
	auto wire = encode_fragment(frag);
	REQUIRE(wire.ok());
	CHECK(wire.value().size() == 1010);
}

TEST_CASE("fragment round trip") {
	Rng rng(0xF00D);
	for (int iter = 0; iter < 5000; ++iter) {
		AppFragment frag = random_response(rng, 50);
		auto wire = encode_fragment(frag);
		REQUIRE(wire.ok());
		auto back = decode_fragment(wire.value());
		REQUIRE(back.ok());
		// app encoding does not carry the transport sequence
		AppFragment got = back.take();
		got.transport_seq = frag.transport_seq;
		REQUIRE(got == frag);
	}
}

TEST_CASE("read request layout") {
	auto frag = encode_read_request(16, 5);
	CHECK(frag.function == FunctionCode::Read);
	REQUIRE(frag.objects.size() == 1);
	CHECK(frag.objects[0].group == 30);
	CHECK(frag.objects[0].count == 16);
	auto wire = encode_fragment(frag);
	REQUIRE(wire.ok());
	CHECK(wire.value().size() == 10); // header-only block, no point bodies
	auto back = decode_fragment(wire.value());
	REQUIRE(back.ok());
	AppFragment got = back.take();
	got.transport_seq = frag.transport_seq;
	CHECK(got == frag);
}

TEST_CASE("operate request and ack") {
	std::vector<OperatePoint> pts = {{2, 1200}, {5, -40}};
	auto req = encode_operate(pts, 9);
	CHECK(req.function == FunctionCode::Operate);
	auto wire = encode_fragment(req);
	REQUIRE(wire.ok());
	CHECK(wire.value().size() == 4 + 6 + 6 * 2);
	auto back = decode_fragment(wire.value());
	REQUIRE(back.ok());
	AppFragment got = back.take();
	got.transport_seq = req.transport_seq;
	REQUIRE(got == req);

	auto ack = make_operate_ack(req);
	CHECK(ack.function == FunctionCode::Response);
	CHECK(ack.app_seq == req.app_seq);
	CHECK(ack.transport_seq == req.transport_seq);
	REQUIRE(ack.objects.size() == 1);
	CHECK(ack.objects[0].group == 12);
	REQUIRE(ack.objects[0].operates() != nullptr);
	CHECK(*ack.objects[0].operates() == pts);
}

TEST_CASE("decode rejects malformed fragments") {
	auto frag = encode_analog_response({1, 2, 3}, 0);
	auto wire = encode_fragment(frag).take();

	SECTION("truncated body") {
		Bytes w(wire.begin(), wire.end() - 1);
		auto r = decode_fragment(w);
		REQUIRE(!r.ok());
		CHECK(r.error() == AppError::Truncated);
	}
	SECTION("trailing octets") {
		auto w = wire;
		w.push_back(0xEE);
		auto r = decode_fragment(w);
		REQUIRE(!r.ok());
		CHECK(r.error() == AppError::TrailingOctets);
	}
	SECTION("unsupported object group") {
		auto w = wire;
		w[4] = 99; // group octet of the first block
		auto r = decode_fragment(w);
		REQUIRE(!r.ok());
		CHECK(r.error() == AppError::UnsupportedObject);
	}
}

TEST_CASE("segmentation splits at 249 user octets") {
	// 1011-octet fragment: 249*4 = 996 carried by four full frames,
	// 15 octets left for a fifth
	auto frag = encode_analog_response(std::vector<int32_t>(201, 1), 0);
	auto wire = encode_fragment(frag);
	REQUIRE(wire.ok());
	REQUIRE(wire.value().size() == 1015);

	auto frames = segment_fragment(frag, 100, 200);
	REQUIRE(frames.ok());
	REQUIRE(frames.value().size() == 5);
	for (size_t i = 0; i < 4; ++i)
		CHECK(frames.value()[i].user_data.size() == 250); // transport octet + 249
	CHECK(frames.value()[4].user_data.size() == 20);      // transport octet + 19

	uint8_t first = frames.value()[0].user_data[0];
	uint8_t last = frames.value()[4].user_data[0];
	CHECK((first & 0x40) != 0); // FIR
	CHECK((first & 0x80) == 0);
	CHECK((last & 0x80) != 0); // FIN
	CHECK((last & 0x40) == 0);
}

TEST_CASE("reassembly inverts segmentation") {
	Rng rng(0x5E6);
	for (int iter = 0; iter < 1000; ++iter) {
		AppFragment frag = random_response(rng, 300);
		auto frames = segment_fragment(frag, 7, 1024);
		REQUIRE(frames.ok());
		auto back = reassemble_fragment(frames.value());
		REQUIRE(back.ok());
		REQUIRE(back.value() == frag);
	}
}

TEST_CASE("reassembly rejects broken sequences") {
	auto frag = encode_analog_response(std::vector<int32_t>(150, 3), 1);
	auto frames = segment_fragment(frag, 1, 2).take();
	REQUIRE(frames.size() >= 3);

	SECTION("missing middle frame") {
		std::vector<LinkFrame> torn = {frames[0], frames[2]};
		auto r = reassemble_fragment(torn);
		REQUIRE(!r.ok());
		CHECK(r.error() == TransportError::BadSequence);
	}
	SECTION("missing final frame") {
		std::vector<LinkFrame> torn(frames.begin(), frames.end() - 1);
		auto r = reassemble_fragment(torn);
		REQUIRE(!r.ok());
		CHECK(r.error() == TransportError::MissingFin);
	}
	SECTION("no frames at all") {
		auto r = reassemble_fragment({});
		REQUIRE(!r.ok());
		CHECK(r.error() == TransportError::EmptyFrameList);
	}
	SECTION("mixed addresses") {
		auto mixed = frames;
		mixed[1].src = static_cast<uint16_t>(mixed[1].src + 1);
		auto r = reassemble_fragment(mixed);
		REQUIRE(!r.ok());
		CHECK(r.error() == TransportError::MixedAddresses);
	}
}

TEST_CASE("wire size helper matches actual encoding") {
	Rng rng(0x31415);
	for (int iter = 0; iter < 200; ++iter) {
		AppFragment frag = random_response(rng, 250);
		auto wire = encode_fragment(frag).take();
		auto frames = segment_fragment(frag, 3, 4).take();
		size_t total = 0;
		for (const auto& f : frames) total += encode_link_frame(f).take().size();
		CHECK(total == encoded_wire_size(wire.size()));
	}
	// the 200-point response: 1010-octet fragment, 1195 octets framed
	CHECK(encoded_wire_size(1010) == 1195);
}
