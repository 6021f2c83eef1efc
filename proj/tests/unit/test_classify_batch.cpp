// Copyright 2026 The erascan Authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <erascan/classify_batch.hpp>

#include "fixtures.hpp"

using namespace erascan;

TEST_CASE("parallel classification matches the serial reference") {
    const auto corpus = testing::make_planted_corpus(13);
    const AccountStore accounts(corpus.accounts);
    const TxStore txs(corpus.txs);
    const auto config = DetectorConfig::defaults();
    const auto serial = classify_accounts_serial(accounts, txs, config);
    REQUIRE(serial.size() == accounts.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i].address == accounts.accounts()[i].address);
    for (int workers : {1, 2, 4, 0}) {
        CHECK(classify_accounts(accounts, txs, config, workers) == serial);
    }
}

TEST_CASE("parallel interaction extraction matches the serial reference") {
    const auto corpus = testing::make_planted_corpus(14);
    const AccountStore accounts(corpus.accounts);
    const TxStore txs(corpus.txs);
    const auto config = DetectorConfig::defaults();
    const auto classified = classify_accounts_serial(accounts, txs, config);
    const auto serial = extract_interactions_serial(accounts, classified, config);
    std::size_t dos = 0;
    for (const auto& c : classified) dos += is_dos_contract(c) && !accounts.find(c.address)->is_eoa();
    CHECK(serial.size() == dos);
    for (int workers : {1, 3}) {
        const auto parallel = extract_interactions(accounts, classified, config, workers);
        REQUIRE(parallel.size() == serial.size());
        for (std::size_t i = 0; i < serial.size(); ++i) {
            CHECK(parallel[i].contract == serial[i].contract);
            CHECK(parallel[i].calls.size() == serial[i].calls.size());
            CHECK(parallel[i].probes.size() == serial[i].probes.size());
            CHECK(parallel[i].complete == serial[i].complete);
        }
    }
}

TEST_CASE("planted counts are recovered exactly") {
    const auto corpus = testing::make_planted_corpus(15);
    const AccountStore accounts(corpus.accounts);
    const TxStore txs(corpus.txs);
    const auto classified = classify_accounts(accounts, txs, DetectorConfig::defaults(), 2);
    std::map<Label, std::size_t> got;
    for (const auto& c : classified) {
        const auto& want = corpus.expected.at(c.address);
        INFO(c.address.hex(), " ", corpus.clean_kind.count(c.address) ? corpus.clean_kind.at(c.address) : "");
        CHECK(c.primary == want);
        if (c.primary) ++got[*c.primary];
    }
    CHECK(got == corpus.planted_counts());
    CHECK(corpus.accounts.size() == 1000);
}

TEST_CASE("empty stores classify to nothing") {
    CHECK(classify_accounts(AccountStore{}, TxStore{}, DetectorConfig::defaults()).empty());
    CHECK(extract_interactions(AccountStore{}, {}, DetectorConfig::defaults()).empty());
}
